#pragma once

#include <memory>
#include <string>
#include <vector>

#include "levelforge/latent.hpp"
#include "levelforge/level.hpp"

namespace lf {

/// Deterministic latent-to-segment decoder. `generate` must be a pure
/// function of (backend state, latent).
class GeneratorBackend {
 public:
  virtual ~GeneratorBackend() = default;
  virtual Segment generate(const Latent& z) const = 0;
  virtual std::string kind() const = 0;
};

struct PoolEntry {
  Segment segment;
  Latent code;
};

/// Nearest-neighbor lookup over a fixed set of (segment, code) pairs, giving a
/// piecewise-constant latent-to-segment map.
class SegmentPool final : public GeneratorBackend {
 public:
  SegmentPool(std::vector<PoolEntry> entries, std::uint64_t seed, std::string source,
              std::uint64_t corpus_hash);

  /// Entry whose code is Euclidean-closest to z; ties break to the lowest index.
  Segment generate(const Latent& z) const override;
  std::string kind() const override { return "pool"; }

  const std::vector<PoolEntry>& entries() const { return entries_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t corpus_hash() const { return corpus_hash_; }
  const std::string& source() const { return source_; }

  void save(const std::string& path) const;
  static SegmentPool load(const std::string& path);

 private:
  std::vector<PoolEntry> entries_;
  std::uint64_t seed_ = 0;
  std::string source_;
  std::uint64_t corpus_hash_ = 0;
};

/// Slice every corpus level into segments, repair each, and assign codes drawn
/// uniformly from [-1,1]^32 with the given seed.
SegmentPool build_pool(const std::vector<Level>& corpus, int width, int stride,
                       std::uint64_t seed, std::string source = "");

/// Closed-form latent decoding: dims 0-13 shape per-column ground height,
/// later dims gate gaps, pipes, enemies, question blocks/coins and platforms.
Segment procedural_decode(const Latent& z, const TileAlphabet& alpha = TileAlphabet::smb());

class ProceduralBackend final : public GeneratorBackend {
 public:
  explicit ProceduralBackend(const TileAlphabet& alpha = TileAlphabet::smb())
      : alpha_(&alpha) {}
  Segment generate(const Latent& z) const override { return procedural_decode(z, *alpha_); }
  std::string kind() const override { return "procedural"; }

 private:
  const TileAlphabet* alpha_;
};

/// Feed-forward decoder loaded from a weights file: tanh hidden layers, one
/// glyph logit per (tile, glyph), per-tile argmax. Lets a trained generator be
/// plugged in without recompiling.
class ExternalDecoder final : public GeneratorBackend {
 public:
  ExternalDecoder(std::vector<Eigen::MatrixXd> weights, std::vector<Eigen::VectorXd> biases,
                  std::string glyphs, int rows, int cols);

  Segment generate(const Latent& z) const override;
  std::string kind() const override { return "external-decoder"; }

  void save(const std::string& path) const;
  static ExternalDecoder load(const std::string& path);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::string& glyphs() const { return glyphs_; }

 private:
  std::vector<Eigen::MatrixXd> weights_;  // layer k maps sizes[k] -> sizes[k+1]
  std::vector<Eigen::VectorXd> biases_;
  std::string glyphs_;  // argmax index -> glyph
  int rows_ = 0;
  int cols_ = 0;
};

}  // namespace lf
