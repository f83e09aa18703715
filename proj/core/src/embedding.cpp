#include "tsinfo/embedding.hpp"

#include <algorithm>

namespace tsinfo {

void EmbeddingSpec::validate() const {
  if (k < 0) throw Error(Errc::InvalidArgument, "memory length k must be >= 0");
  if (tau < 1) throw Error(Errc::InvalidArgument, "lag tau must be >= 1");
}

std::vector<int> AlignedSamples::block_columns(std::size_t block_index) const {
  std::vector<int> cols(static_cast<std::size_t>(blocks[block_index].second));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    cols[j] = block_offsets[block_index] + static_cast<int>(j);
  }
  return cols;
}

std::vector<double> embed(const TimeSeries& series, const EmbeddingSpec& spec,
                          long present_index) {
  spec.validate();
  if (spec.k == 0) return {};
  std::vector<double> out(static_cast<std::size_t>(spec.k));
  for (int j = 0; j < spec.k; ++j) {
    const long idx = present_index + spec.lead - static_cast<long>(j) * spec.tau;
    out[static_cast<std::size_t>(j)] = series.at(idx);  // throws OutOfRange
  }
  return out;
}

AlignedSamples align(const Dataset& dataset, const std::vector<BlockSpec>& blocks) {
  const long t_len = dataset.length();
  long start = 1;
  long stop = t_len;
  int total_dim = 0;
  for (const auto& b : blocks) {
    b.spec.validate();
    if (!dataset.has_column(b.column)) {
      throw Error(Errc::InvalidArgument, "no column named '" + b.column + "'");
    }
    total_dim += b.spec.k;
    if (b.spec.k == 0) continue;  // null block constrains nothing
    const long lead = b.spec.lead;
    start = std::max(start, 1 + static_cast<long>(b.spec.k - 1) * b.spec.tau - lead);
    stop = std::min(stop, t_len - lead);
  }
  if (start > stop) {
    throw Error(Errc::EmptyAlignment,
                "no present index admits all blocks (T=" + std::to_string(t_len) + ")");
  }

  AlignedSamples out;
  const long n_eff = stop - start + 1;
  out.rows.resize(n_eff, total_dim);
  out.present_indices.resize(static_cast<std::size_t>(n_eff));
  out.column_tags.reserve(static_cast<std::size_t>(total_dim));
  int offset = 0;
  for (const auto& b : blocks) {
    out.blocks.emplace_back(b.label, b.spec.k);
    out.block_offsets.push_back(offset);
    const TimeSeries& col = dataset.column(b.column);
    for (int j = 0; j < b.spec.k; ++j) {
      const long lag = b.spec.lead - static_cast<long>(j) * b.spec.tau;
      out.column_tags.push_back(ColumnTag{b.column, lag});
      for (long r = 0; r < n_eff; ++r) {
        out.rows(r, offset + j) = col.at(start + r + lag);
      }
    }
    offset += b.spec.k;
  }
  for (long r = 0; r < n_eff; ++r) {
    out.present_indices[static_cast<std::size_t>(r)] = start + r;
  }
  return out;
}

}  // namespace tsinfo
