#include "levelforge/generator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "levelforge/errors.hpp"
#include "levelforge/io.hpp"
#include "levelforge/repair.hpp"

namespace lf {

namespace {

constexpr char kPoolMagic[] = "LFPOOL";
constexpr char kDecoderMagic[] = "LFDEC";
constexpr std::uint8_t kFormatVersion = 1;

int clamp_int(long v, int lo, int hi) {
  return static_cast<int>(std::clamp<long>(v, lo, hi));
}

/// Topmost solid row of a column; rows() if the column is open.
int ground_top(const Segment& s, const TileAlphabet& alpha, int c) {
  for (int r = 0; r < s.rows(); ++r)
    if (alpha.solid(s.at(r, c))) return r;
  return s.rows();
}

}  // namespace

SegmentPool::SegmentPool(std::vector<PoolEntry> entries, std::uint64_t seed,
                         std::string source, std::uint64_t corpus_hash)
    : entries_(std::move(entries)), seed_(seed), source_(std::move(source)),
      corpus_hash_(corpus_hash) {
  if (entries_.empty()) throw DataError("segment pool has no entries");
}

Segment SegmentPool::generate(const Latent& z) const {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const double d2 = (entries_[i].code - z).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return entries_[best].segment;
}

SegmentPool build_pool(const std::vector<Level>& corpus, int width, int stride,
                       std::uint64_t seed, std::string source) {
  if (corpus.empty()) throw DataError("empty corpus");
  std::string corpus_bytes;
  std::vector<PoolEntry> entries;
  Rng rng(seed);
  for (const Level& level : corpus) {
    corpus_bytes += level.serialize();
    for (Segment& seg : slice_segments(level, width, stride)) {
      PoolEntry e;
      e.segment = repair(std::move(seg));
      e.code = uniform_latent(rng);
      entries.push_back(std::move(e));
    }
  }
  return SegmentPool(std::move(entries), seed, std::move(source), fnv1a64(corpus_bytes));
}

void SegmentPool::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write '" + path + "'");
  os.write(kPoolMagic, sizeof(kPoolMagic) - 1);
  write_u8(os, kFormatVersion);
  write_u64(os, seed_);
  write_u64(os, corpus_hash_);
  write_bytes(os, source_);
  write_u16(os, static_cast<std::uint16_t>(entries_[0].segment.rows()));
  write_u16(os, static_cast<std::uint16_t>(entries_[0].segment.cols()));
  write_u32(os, static_cast<std::uint32_t>(entries_.size()));
  for (const auto& e : entries_) {
    for (int i = 0; i < kLatentDim; ++i) write_f64(os, e.code[i]);
    os.write(e.segment.cells().data(),
             static_cast<std::streamsize>(e.segment.cells().size()));
  }
}

SegmentPool SegmentPool::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open pool file '" + path + "'");
  expect_magic(is, kPoolMagic, "segment pool");
  const std::uint8_t version = read_u8(is);
  if (version != kFormatVersion)
    throw DataError("unsupported pool file version " + std::to_string(version));
  const std::uint64_t seed = read_u64(is);
  const std::uint64_t corpus_hash = read_u64(is);
  const std::string source = read_bytes(is);
  const int rows = read_u16(is);
  const int cols = read_u16(is);
  const std::uint32_t count = read_u32(is);
  std::vector<PoolEntry> entries;
  entries.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    PoolEntry e;
    for (int k = 0; k < kLatentDim; ++k) e.code[k] = read_f64(is);
    e.segment = TileGrid(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        const int ch = is.get();
        if (ch == EOF) throw DataError("truncated pool file");
        e.segment.at(r, c) = static_cast<char>(ch);
      }
    entries.push_back(std::move(e));
  }
  return SegmentPool(std::move(entries), seed, source, corpus_hash);
}

Segment procedural_decode(const Latent& z, const TileAlphabet& alpha) {
  const int rows = kSegmentRows;
  const int cols = kSegmentCols;
  const char empty = alpha.glyph_for(TileRole::Empty);
  const char solid = alpha.glyph_for(TileRole::Solid);

  // Dims 0-13: per-column ground height, smoothed left to right so adjacent
  // columns differ by at most 2.
  int height[kSegmentCols];
  for (int c = 0; c < cols; ++c) height[c] = static_cast<int>(std::lround(4.0 + 3.0 * z[c]));
  for (int c = 1; c < cols; ++c)
    height[c] = std::clamp(height[c], height[c - 1] - 2, height[c - 1] + 2);

  // Dims 14-17: width-2 gaps.
  for (int j = 14; j <= 17; ++j) {
    if (z[j] <= 0.5) continue;
    const int c = clamp_int(std::lround(6.5 * (z[j] + 1.0)), 0, cols - 2);
    height[c] = 0;
    height[c + 1] = 0;
  }

  Segment s(rows, cols, empty);
  for (int c = 0; c < cols; ++c)
    for (int r = rows - height[c]; r < rows; ++r) s.at(r, c) = solid;

  // Dims 18-21: pipes resting on the lower of their two ground columns.
  for (int j = 18; j <= 21; ++j) {
    if (z[j] <= 0.3) continue;
    const int pipe_height = 2 + static_cast<int>(std::lround(z[j] + 1.0));
    const int c = clamp_int(std::lround(6.0 * (z[j] + 1.0)), 0, cols - 2);
    const int base = std::max(ground_top(s, alpha, c), ground_top(s, alpha, c + 1));
    const int top = std::max(0, base - pipe_height);
    s.at(top, c) = alpha.glyph_for(TileRole::PipeTopLeft);
    s.at(top, c + 1) = alpha.glyph_for(TileRole::PipeTopRight);
    for (int r = top + 1; r < base; ++r) {
      s.at(r, c) = alpha.glyph_for(TileRole::PipeBodyLeft);
      s.at(r, c + 1) = alpha.glyph_for(TileRole::PipeBodyRight);
    }
  }

  // Dims 22-25: enemies standing on the local ground.
  for (int j = 22; j <= 25; ++j) {
    if (z[j] <= 0.4) continue;
    const int c = clamp_int(std::lround(6.5 * (z[j] + 1.0)), 0, cols - 1);
    const int g = ground_top(s, alpha, c);
    if (g < rows && g - 1 >= 0 && s.at(g - 1, c) == empty)
      s.at(g - 1, c) = alpha.glyph_for(TileRole::Enemy);
  }

  // Dims 26-29: question block (positive) or coin (negative) 4 tiles above ground.
  for (int j = 26; j <= 29; ++j) {
    if (std::abs(z[j]) <= 0.5) continue;
    const int c = clamp_int(std::lround(6.5 * (z[j] + 1.0)), 0, cols - 1);
    const int g = ground_top(s, alpha, c);
    const int r = g - 4;
    if (g < rows && r >= 0 && s.at(r, c) == empty)
      s.at(r, c) =
          alpha.glyph_for(z[j] > 0.0 ? TileRole::Question : TileRole::Coin);
  }

  // Dims 30-31: 3-wide breakable platform 3 tiles above ground.
  for (int j = 30; j <= 31; ++j) {
    if (z[j] <= 0.6) continue;
    const int c = clamp_int(std::lround(5.0 * (z[j] + 1.0)), 0, cols - 3);
    const int g = ground_top(s, alpha, c);
    const int r = g - 3;
    if (g >= rows || r < 0) continue;
    for (int cc = c; cc < c + 3; ++cc)
      if (s.at(r, cc) == empty) s.at(r, cc) = alpha.glyph_for(TileRole::Breakable);
  }

  return s;
}

ExternalDecoder::ExternalDecoder(std::vector<Eigen::MatrixXd> weights,
                                 std::vector<Eigen::VectorXd> biases, std::string glyphs,
                                 int rows, int cols)
    : weights_(std::move(weights)), biases_(std::move(biases)), glyphs_(std::move(glyphs)),
      rows_(rows), cols_(cols) {
  if (weights_.empty() || weights_.size() != biases_.size())
    throw DataError("decoder layer lists are inconsistent");
  if (glyphs_.empty()) throw DataError("decoder glyph table is empty");
  if (weights_.front().cols() != kLatentDim)
    throw DataError("decoder input size must be " + std::to_string(kLatentDim));
  const Eigen::Index out = weights_.back().rows();
  const Eigen::Index expected =
      static_cast<Eigen::Index>(rows_) * cols_ * static_cast<Eigen::Index>(glyphs_.size());
  if (out != expected)
    throw DataError("decoder output size does not match rows*cols*glyphs");
}

Segment ExternalDecoder::generate(const Latent& z) const {
  Eigen::VectorXd x = z;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    x = weights_[k] * x + biases_[k];
    if (k + 1 < weights_.size()) x = x.array().tanh();
  }
  Segment s(rows_, cols_);
  const int n_glyphs = static_cast<int>(glyphs_.size());
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      const int base = (r * cols_ + c) * n_glyphs;
      int best = 0;
      for (int g = 1; g < n_glyphs; ++g)
        if (x[base + g] > x[base + best]) best = g;
      s.at(r, c) = glyphs_[best];
    }
  }
  return s;
}

void ExternalDecoder::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write '" + path + "'");
  os.write(kDecoderMagic, sizeof(kDecoderMagic) - 1);
  write_u8(os, kFormatVersion);
  write_u16(os, static_cast<std::uint16_t>(rows_));
  write_u16(os, static_cast<std::uint16_t>(cols_));
  write_bytes(os, glyphs_);
  write_u32(os, static_cast<std::uint32_t>(weights_.size()));
  write_u32(os, static_cast<std::uint32_t>(weights_.front().cols()));
  for (const auto& w : weights_) write_u32(os, static_cast<std::uint32_t>(w.rows()));
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    const auto& w = weights_[k];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) write_f64(os, w(r, c));
    for (Eigen::Index r = 0; r < biases_[k].size(); ++r) write_f64(os, biases_[k][r]);
  }
}

ExternalDecoder ExternalDecoder::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open decoder file '" + path + "'");
  expect_magic(is, kDecoderMagic, "decoder weights");
  const std::uint8_t version = read_u8(is);
  if (version != kFormatVersion)
    throw DataError("unsupported decoder file version " + std::to_string(version));
  const int rows = read_u16(is);
  const int cols = read_u16(is);
  const std::string glyphs = read_bytes(is);
  const std::uint32_t n_layers = read_u32(is);
  if (n_layers == 0 || n_layers > 64) throw DataError("bad decoder layer count");
  std::vector<int> sizes;
  sizes.push_back(static_cast<int>(read_u32(is)));
  for (std::uint32_t k = 0; k < n_layers; ++k) sizes.push_back(static_cast<int>(read_u32(is)));
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  for (std::uint32_t k = 0; k < n_layers; ++k) {
    Eigen::MatrixXd w(sizes[k + 1], sizes[k]);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = read_f64(is);
    Eigen::VectorXd b(sizes[k + 1]);
    for (Eigen::Index r = 0; r < b.size(); ++r) b[r] = read_f64(is);
    weights.push_back(std::move(w));
    biases.push_back(std::move(b));
  }
  return ExternalDecoder(std::move(weights), std::move(biases), glyphs, rows, cols);
}

}  // namespace lf
