#include "edgeclust/datagen.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

namespace edgeclust {

std::string_view to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::kCrossbones: return "crossbones";
    case SyntheticKind::kGrid: return "grid";
    case SyntheticKind::kBlobs: return "blobs";
    case SyntheticKind::kCircles: return "circles";
  }
  return "?";
}

SyntheticKind parse_synthetic_kind(std::string_view name) {
  for (SyntheticKind k : {SyntheticKind::kCrossbones, SyntheticKind::kGrid,
                          SyntheticKind::kBlobs, SyntheticKind::kCircles}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown dataset kind '" + std::string(name) +
                              "' (expected crossbones, grid, blobs or circles)");
}

SampleSet gen_synthetic(const SyntheticSpec& spec, Rng& rng) {
  if (spec.k < 1 || spec.n < spec.k) {
    throw std::invalid_argument("gen_synthetic: need n >= k >= 1");
  }
  if (!(spec.noise >= 0.0) || !std::isfinite(spec.noise)) {
    throw std::invalid_argument("gen_synthetic: noise must be finite and >= 0");
  }
  if (!(spec.length > 0.0) || !std::isfinite(spec.length)) {
    throw std::invalid_argument("gen_synthetic: length must be positive");
  }
  if (spec.kind == SyntheticKind::kCrossbones && spec.k != 2) {
    throw std::invalid_argument("gen_synthetic: crossbones has exactly 2 clusters");
  }
  const double sd = spec.noise * spec.length;
  const double half = spec.length / 2.0;
  const Index side = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(spec.k))));
  const double pitch = half + spec.spacing;

  SampleSet s;
  s.features = Matrix(spec.n, 2);
  s.labels = std::vector<int>(spec.n);
  for (Index i = 0; i < spec.n; ++i) {
    const Index c = i % spec.k;
    double x = 0.0, y = 0.0;
    switch (spec.kind) {
      case SyntheticKind::kCrossbones: {
        const double t = rng.uniform(-half, half);
        const double a = c == 0 ? 0.0 : spec.angle_degrees * std::numbers::pi / 180.0;
        x = t * std::cos(a);
        y = t * std::sin(a);
        break;
      }
      case SyntheticKind::kGrid: {
        const Index row = c / side, col = c % side;
        const double t = rng.uniform(-half, half);
        x = static_cast<double>(col) * pitch;
        y = static_cast<double>(row) * pitch;
        if ((row + col) % 2 == 0) {
          x += t;
        } else {
          y += t;
        }
        break;
      }
      case SyntheticKind::kBlobs: {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(c) /
                         static_cast<double>(spec.k);
        x = spec.length * std::cos(a);
        y = spec.length * std::sin(a);
        break;
      }
      case SyntheticKind::kCircles: {
        const double radius = spec.length * static_cast<double>(c + 1) /
                              static_cast<double>(spec.k);
        const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
        x = radius * std::cos(a);
        y = radius * std::sin(a);
        break;
      }
    }
    if (sd > 0.0) {
      x += rng.normal(0.0, sd);
      y += rng.normal(0.0, sd);
    }
    s.features(i, 0) = x;
    s.features(i, 1) = y;
    (*s.labels)[i] = static_cast<int>(c) + 1;
  }
  return s;
}

EdgeLevelData gen_edge_level(const EdgeLevelSpec& spec, Rng& rng) {
  if (spec.sizes.empty()) throw std::invalid_argument("gen_edge_level: no clusters");
  if (spec.p1.dim() != spec.p0.dim()) {
    throw std::invalid_argument("gen_edge_level: p1 and p0 dimensions differ");
  }
  std::vector<int> labels;
  for (Index c = 0; c < spec.sizes.size(); ++c) {
    if (spec.sizes[c] == 0) throw std::invalid_argument("gen_edge_level: empty cluster");
    labels.insert(labels.end(), spec.sizes[c], static_cast<int>(c) + 1);
  }
  EdgeLevelData out;
  out.truth = validate_partition(labels);
  const Index n = labels.size();
  out.features.n = n;
  out.features.vectors = Matrix(pair_count(n), spec.p1.dim());
  out.features.pairs.reserve(pair_count(n));
  Index r = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j, ++r) {
      out.features.pairs.push_back({i, j});
      const auto e = labels[i] == labels[j] ? spec.p1.sample(rng) : spec.p0.sample(rng);
      std::copy(e.begin(), e.end(), out.features.vectors.row(r).begin());
    }
  }
  return out;
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  while (true) {
    const auto pos = line.find(',');
    cells.push_back(line.substr(0, pos));
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + 1);
  }
  for (auto& c : cells) {
    while (!c.empty() && (c.front() == ' ' || c.front() == '\t')) c.remove_prefix(1);
    while (!c.empty() && (c.back() == ' ' || c.back() == '\t')) c.remove_suffix(1);
  }
  return cells;
}

bool parse_number(std::string_view cell, double& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && end == cell.data() + cell.size() && std::isfinite(out);
}

// Reads lines, dropping a trailing CR and skipping blank lines.
template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string line;
  Index number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    fn(number, std::string_view(line));
  }
}

std::string_view format_double(double v, char (&buf)[64]) {
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, static_cast<std::size_t>(res.ptr - buf)};
}

std::string where(Index line, Index column) {
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

SampleSet read_csv(std::istream& in, bool has_labels) {
  std::vector<double> values;
  std::vector<double> raw_labels;
  Index cols = 0;
  Index rows = 0;
  bool first = true;
  for_each_line(in, [&](Index number, std::string_view line) {
    const auto cells = split_commas(line);
    std::vector<double> parsed(cells.size());
    Index bad = cells.size();
    for (Index c = 0; c < cells.size(); ++c) {
      if (!parse_number(cells[c], parsed[c])) {
        bad = c;
        break;
      }
    }
    if (first) {
      first = false;
      if (bad < cells.size()) return;  // header
    }
    if (bad < cells.size()) {
      throw DataError("csv " + where(number, bad + 1) + ": '" +
                      std::string(cells[bad]) + "' is not a finite number");
    }
    if (cols == 0) {
      cols = cells.size();
      if (has_labels && cols < 2) {
        throw DataError("csv line " + std::to_string(number) +
                        ": need at least one feature column before the label");
      }
    } else if (cells.size() != cols) {
      throw DataError("csv line " + std::to_string(number) + ": expected " +
                      std::to_string(cols) + " columns, found " +
                      std::to_string(cells.size()));
    }
    const Index features = has_labels ? cols - 1 : cols;
    values.insert(values.end(), parsed.begin(), parsed.begin() + static_cast<std::ptrdiff_t>(features));
    if (has_labels) {
      const double l = parsed.back();
      if (l != std::floor(l)) {
        throw DataError("csv " + where(number, cols) + ": label must be an integer");
      }
      raw_labels.push_back(l);
    }
    ++rows;
  });
  if (rows == 0) throw DataError("csv: no data rows");
  SampleSet s;
  const Index d = has_labels ? cols - 1 : cols;
  s.features = Matrix(rows, d);
  std::copy(values.begin(), values.end(), s.features.data().begin());
  if (has_labels) {
    std::map<double, int> ids;
    for (double l : raw_labels) ids.emplace(l, 0);
    int next = 0;
    for (auto& [value, id] : ids) id = ++next;
    std::vector<int> labels;
    labels.reserve(rows);
    for (double l : raw_labels) labels.push_back(ids[l]);
    s.labels = std::move(labels);
  }
  check_sample_set(s);
  return s;
}

SampleSet load_csv(const std::filesystem::path& path, bool has_labels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return read_csv(in, has_labels);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_csv(const SampleSet& s, std::ostream& out) {
  for (Index c = 0; c < s.dim(); ++c) out << (c ? ",x" : "x") << c;
  if (s.labels) out << ",label";
  out << '\n';
  char buf[64];
  for (Index i = 0; i < s.n(); ++i) {
    for (Index c = 0; c < s.dim(); ++c) {
      if (c) out << ',';
      out << format_double(s.features(i, c), buf);
    }
    if (s.labels) out << ',' << (*s.labels)[i];
    out << '\n';
  }
}

std::vector<LabeledPair> read_pairs_csv(std::istream& in, Index n) {
  std::vector<LabeledPair> pairs;
  std::set<PairIndex> seen;
  bool first = true;
  for_each_line(in, [&](Index number, std::string_view line) {
    const auto cells = split_commas(line);
    std::uint64_t v[3] = {0, 0, 0};
    bool ok = cells.size() == 3;
    for (Index c = 0; ok && c < 3; ++c) {
      const auto [end, ec] = std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), v[c]);
      ok = ec == std::errc() && end == cells[c].data() + cells[c].size();
    }
    if (first) {
      first = false;
      if (!ok) return;  // header
    }
    if (!ok) {
      throw DataError("pairs line " + std::to_string(number) +
                      ": expected 'i,j,same' with non-negative integers");
    }
    if (v[0] >= n || v[1] >= n || v[0] == v[1]) {
      throw DataError("pairs line " + std::to_string(number) +
                      ": node ids must be distinct and below " + std::to_string(n));
    }
    if (v[2] > 1) {
      throw DataError("pairs line " + std::to_string(number) + ": same must be 0 or 1");
    }
    const PairIndex p = make_pair_index(v[0], v[1]);
    if (!seen.insert(p).second) {
      throw DataError("pairs line " + std::to_string(number) + ": duplicate pair");
    }
    pairs.push_back({p, v[2] == 1});
  });
  return pairs;
}

void write_pairs_csv(std::span<const LabeledPair> pairs, std::ostream& out) {
  out << "i,j,same\n";
  for (const LabeledPair& p : pairs) {
    out << p.pair.i << ',' << p.pair.j << ',' << (p.same ? 1 : 0) << '\n';
  }
}

}  // namespace edgeclust
