#include "nfp/dataset.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nfp/error.hpp"
#include "nfp/simulator.hpp"

namespace nfp {

std::vector<std::size_t> LabeledDataset::class_counts() const {
  std::vector<std::size_t> counts(n_classes(), 0);
  for (int l : labels) ++counts.at(static_cast<std::size_t>(l));
  return counts;
}

void validate(const LabeledDataset& d) {
  if (d.class_names.size() < 2) throw DataError("dataset needs at least 2 classes");
  if (static_cast<std::size_t>(d.features.rows()) != d.labels.size()) {
    throw DataError("feature rows and labels disagree");
  }
  if (d.dim() != d.steps.size() * d.outcomes_per_step) {
    throw DataError("feature dimension does not match steps x outcomes");
  }
  for (int l : d.labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= d.n_classes()) {
      throw DataError("label " + std::to_string(l) + " outside [0, " +
                      std::to_string(d.n_classes()) + ")");
    }
  }
}

std::vector<double> probabilities(const Counts& counts, std::uint64_t shots) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (shots == 0 || total != shots) {
    throw InvalidArgument("counts sum " + std::to_string(total) + " != shots " +
                          std::to_string(shots));
  }
  std::vector<double> p(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    p[i] = static_cast<double>(counts[i]) / static_cast<double>(shots);
  }
  return p;
}

namespace {

struct Group {
  double t_hours = 0.0;
  std::map<std::size_t, const RunRecord*> by_step;
};

using GroupId = std::pair<double, std::size_t>;

// Groups in ascending (time, ordinal) order.
std::vector<Group> group_records(const std::vector<RunRecord>& records, GroupKey key) {
  std::map<GroupId, Group> groups;
  std::map<std::pair<std::size_t, double>, std::size_t> seen;  // (step, t) -> count
  for (const auto& r : records) {
    const double t = key == GroupKey::TimeOrdinal ? r.t_hours : 0.0;
    const std::size_t ordinal = seen[{r.step, t}]++;
    auto& g = groups[{t, ordinal}];
    if (g.by_step.empty()) g.t_hours = r.t_hours;
    g.by_step.emplace(r.step, &r);
  }
  std::vector<Group> out;
  out.reserve(groups.size());
  for (auto& [id, g] : groups) out.push_back(std::move(g));
  return out;
}

// Feature row for a group, or false if a requested step is missing.
bool fill_row(const Group& g, const std::vector<std::size_t>& steps, std::size_t outcomes,
              std::vector<double>& row) {
  row.clear();
  for (auto s : steps) {
    auto it = g.by_step.find(s);
    if (it == g.by_step.end()) return false;
    const auto* r = it->second;
    if (r->counts.size() != outcomes) {
      throw DataError("record of step " + std::to_string(s) + " has " +
                      std::to_string(r->counts.size()) + " outcomes, expected " +
                      std::to_string(outcomes));
    }
    const auto p = probabilities(r->counts, r->shots);
    row.insert(row.end(), p.begin(), p.end());
  }
  return true;
}

std::vector<std::size_t> checked_steps(std::vector<std::size_t> steps) {
  if (steps.empty()) throw InvalidArgument("at least one step is required");
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  if (steps.front() == 0) throw InvalidArgument("steps are 1-based");
  return steps;
}

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows, std::size_t dim) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

std::size_t outcome_width(const std::vector<RunRecord>& records) {
  if (records.empty()) throw DataError("no records");
  return records.front().counts.size();
}

}  // namespace

BuildResult build_machine_dataset(const std::vector<std::vector<RunRecord>>& records_by_device,
                                  const std::vector<std::size_t>& steps_in, GroupKey key) {
  const auto steps = checked_steps(steps_in);
  if (records_by_device.size() < 2) {
    throw InvalidArgument("a machine dataset needs records from at least 2 devices");
  }
  BuildResult result;
  auto& d = result.dataset;
  d.steps = steps;
  d.outcomes_per_step = outcome_width(records_by_device.front());

  std::vector<std::vector<double>> rows;
  std::vector<double> row;
  std::vector<std::string> sources;
  for (std::size_t dev = 0; dev < records_by_device.size(); ++dev) {
    const auto& records = records_by_device[dev];
    if (records.empty()) throw InvalidArgument("device input " + std::to_string(dev) + " has no records");
    d.class_names.push_back(records.front().device);
    std::size_t kept = 0;
    for (const auto& g : group_records(records, key)) {
      if (!fill_row(g, steps, d.outcomes_per_step, row)) {
        ++result.skipped_groups;
        continue;
      }
      rows.push_back(row);
      d.labels.push_back(static_cast<int>(dev));
      ++kept;
    }
    if (kept == 0) throw InvalidArgument("device '" + d.class_names.back() + "' yields no complete group");
  }
  d.features = to_matrix(rows, steps.size() * d.outcomes_per_step);
  d.provenance = {{"kind", "machines"},
                  {"group_key", key == GroupKey::TimeOrdinal ? "time-ordinal" : "ordinal"},
                  {"skipped_groups", result.skipped_groups}};
  validate(d);
  return result;
}

BuildResult build_timeseries_dataset(const std::vector<RunRecord>& records,
                                     const std::vector<std::size_t>& steps_in,
                                     std::size_t n_windows, GroupKey key) {
  const auto steps = checked_steps(steps_in);
  if (n_windows < 2) throw InvalidArgument("n_windows must be >= 2");
  BuildResult result;
  auto& d = result.dataset;
  d.steps = steps;
  d.outcomes_per_step = outcome_width(records);

  double t0 = records.front().t_hours;
  double t1 = t0;
  for (const auto& r : records) {
    t0 = std::min(t0, r.t_hours);
    t1 = std::max(t1, r.t_hours);
  }
  if (!(t1 > t0)) throw InvalidArgument("records must span a positive time range");
  const double width = (t1 - t0) / static_cast<double>(n_windows);

  std::vector<std::vector<double>> rows;
  std::vector<double> row;
  std::vector<std::size_t> per_window(n_windows, 0);
  for (const auto& g : group_records(records, key)) {
    if (!fill_row(g, steps, d.outcomes_per_step, row)) {
      ++result.skipped_groups;
      continue;
    }
    auto w = static_cast<std::size_t>(std::floor((g.t_hours - t0) / width));
    w = std::min(w, n_windows - 1);
    rows.push_back(row);
    d.labels.push_back(static_cast<int>(w));
    ++per_window[w];
  }
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t w = 0; w < n_windows; ++w) {
    if (per_window[w] == 0) {
      throw InvalidArgument("time window " + std::to_string(w) + " is empty; use fewer windows");
    }
    d.class_names.push_back("window" + std::to_string(w));
    edges.push_back(t0 + width * static_cast<double>(w));
  }
  edges.push_back(t1);
  d.features = to_matrix(rows, steps.size() * d.outcomes_per_step);
  d.provenance = {{"kind", "timeseries"},
                  {"device", records.front().device},
                  {"windows", n_windows},
                  {"window_edges_hours", edges},
                  {"skipped_groups", result.skipped_groups}};
  validate(d);
  return result;
}

std::vector<std::size_t> cumulative_steps(std::size_t t) {
  if (t == 0) throw InvalidArgument("T must be >= 1");
  std::vector<std::size_t> s(t);
  for (std::size_t i = 0; i < t; ++i) s[i] = i + 1;
  return s;
}

std::vector<std::size_t> parse_steps(const std::string& text) {
  auto parse_uint = [&text](std::string_view token) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size() || v == 0) {
      throw InvalidArgument("bad step list '" + text + "'");
    }
    return v;
  };
  std::set<std::size_t> steps;
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto token = rest.substr(0, comma);
    const auto dots = token.find("..");
    if (dots == std::string_view::npos) {
      steps.insert(parse_uint(token));
    } else {
      const auto lo = parse_uint(token.substr(0, dots));
      const auto hi = parse_uint(token.substr(dots + 2));
      if (hi < lo) throw InvalidArgument("bad step range '" + std::string(token) + "'");
      for (auto s = lo; s <= hi; ++s) steps.insert(s);
    }
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  if (steps.empty()) throw InvalidArgument("empty step list");
  return {steps.begin(), steps.end()};
}

LabeledDataset select_steps(const LabeledDataset& d, const std::vector<std::size_t>& steps_in) {
  const auto steps = checked_steps(steps_in);
  LabeledDataset out = d;
  out.steps = steps;
  out.features.resize(d.features.rows(), static_cast<Eigen::Index>(steps.size() * d.outcomes_per_step));
  const auto w = static_cast<Eigen::Index>(d.outcomes_per_step);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    auto it = std::find(d.steps.begin(), d.steps.end(), steps[i]);
    if (it == d.steps.end()) {
      throw InvalidArgument("step " + std::to_string(steps[i]) + " is not in the dataset");
    }
    const auto src = static_cast<Eigen::Index>(it - d.steps.begin());
    out.features.middleCols(static_cast<Eigen::Index>(i) * w, w) = d.features.middleCols(src * w, w);
  }
  return out;
}

LabeledDataset subset(const LabeledDataset& d, const std::vector<std::size_t>& rows) {
  LabeledDataset out = d;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), d.features.cols());
  out.labels.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= d.size()) throw InvalidArgument("row index out of range");
    out.features.row(static_cast<Eigen::Index>(i)) = d.features.row(static_cast<Eigen::Index>(rows[i]));
    out.labels[i] = d.labels[rows[i]];
  }
  return out;
}

Split split(const LabeledDataset& d, SplitFractions f, std::uint64_t seed) {
  if (d.size() == 0) throw InvalidArgument("cannot split an empty dataset");
  if (!(f.train > 0 && f.validation > 0 && f.test > 0) ||
      std::abs(f.train + f.validation + f.test - 1.0) > 1e-9) {
    throw InvalidArgument("split fractions must be positive and sum to 1");
  }
  std::vector<std::vector<std::size_t>> by_class(d.n_classes());
  for (std::size_t i = 0; i < d.size(); ++i) by_class.at(static_cast<std::size_t>(d.labels[i])).push_back(i);

  Split s;
  s.fractions = f;
  s.seed = seed;
  RngStream rng(seed);
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& idx = by_class[c];
    const auto n = idx.size();
    if (n < 3) {
      throw InvalidArgument("class '" + d.class_names[c] + "' has " + std::to_string(n) +
                            " example(s); at least 3 are needed to split");
    }
    // Fisher-Yates; std::shuffle's draw sequence is implementation defined.
    for (std::size_t i = n - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1));
      std::swap(idx[i], idx[std::min(j, i)]);
    }
    const auto nd = static_cast<double>(n);
    const auto n_train = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(f.train * nd)), 1, n - 2);
    const auto cut = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround((f.train + f.validation) * nd)), n_train + 1, n - 1);
    s.train.insert(s.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.validation.insert(s.validation.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train),
                        idx.begin() + static_cast<std::ptrdiff_t>(cut));
    s.test.insert(s.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(cut), idx.end());
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.validation.begin(), s.validation.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

std::string sidecar_path(const std::string& csv_path) {
  return std::filesystem::path(csv_path).replace_extension(".json").string();
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

void write_dataset(const LabeledDataset& d, const std::string& csv_path) {
  validate(d);
  if (sidecar_path(csv_path) == csv_path) throw InvalidArgument("dataset path must not end in .json");
  std::ofstream out(csv_path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + csv_path + "'");
  const auto n_bits = static_cast<std::size_t>(std::countr_zero(d.outcomes_per_step));
  out << "label";
  for (auto s : d.steps) {
    for (std::size_t o = 0; o < d.outcomes_per_step; ++o) out << ",s" << s << "_p" << outcome_label(o, n_bits);
  }
  out << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << d.labels[i];
    for (Eigen::Index j = 0; j < d.features.cols(); ++j) {
      out << ',' << format_double(d.features(static_cast<Eigen::Index>(i), j));
    }
    out << '\n';
  }
  nlohmann::ordered_json meta;
  meta["class_names"] = d.class_names;
  meta["steps"] = d.steps;
  meta["outcomes_per_step"] = d.outcomes_per_step;
  meta["examples"] = d.size();
  meta["provenance"] = d.provenance;
  std::ofstream side(sidecar_path(csv_path), std::ios::binary);
  if (!side) throw DataError("cannot write sidecar for '" + csv_path + "'");
  side << meta.dump(2) << '\n';
}

LabeledDataset read_dataset(const std::string& csv_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + csv_path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError(csv_path + ": empty file");

  auto split_csv = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      cells.push_back(cell);
    }
    return cells;
  };

  LabeledDataset d;
  const auto header = split_csv(line);
  if (header.empty() || header[0] != "label") throw DataError(csv_path + ":1: first column must be 'label'");
  std::map<std::size_t, std::size_t> per_step;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const auto& h = header[c];
    const auto us = h.find("_p");
    std::size_t step = 0;
    if (h.size() < 4 || h[0] != 's' || us == std::string::npos ||
        std::from_chars(h.data() + 1, h.data() + us, step).ec != std::errc{}) {
      throw DataError(csv_path + ":1: bad column name '" + h + "'");
    }
    if (per_step.empty() || per_step.rbegin()->first != step) d.steps.push_back(step);
    ++per_step[step];
  }
  if (d.steps.empty()) throw DataError(csv_path + ":1: no feature columns");
  d.outcomes_per_step = per_step.begin()->second;
  for (const auto& [s, n] : per_step) {
    if (n != d.outcomes_per_step) throw DataError(csv_path + ":1: uneven columns per step");
  }

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  int max_label = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    const std::string where = csv_path + ":" + std::to_string(line_no) + ": ";
    if (cells.size() != header.size()) throw DataError(where + "wrong number of columns");
    int label = 0;
    if (std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), label).ec != std::errc{} ||
        label < 0) {
      throw DataError(where + "column 'label': bad value '" + cells[0] + "'");
    }
    std::vector<double> row(cells.size() - 1);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const auto& cell = cells[c];
      if (std::from_chars(cell.data(), cell.data() + cell.size(), row[c - 1]).ec != std::errc{}) {
        throw DataError(where + "column '" + header[c] + "': bad value '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
    d.labels.push_back(label);
    max_label = std::max(max_label, label);
  }
  d.features = to_matrix(rows, header.size() - 1);

  std::ifstream side(sidecar_path(csv_path));
  if (side) {
    try {
      nlohmann::json meta;
      side >> meta;
      d.class_names = meta.at("class_names").get<std::vector<std::string>>();
      if (meta.contains("provenance")) d.provenance = meta.at("provenance");
    } catch (const nlohmann::json::exception& e) {
      throw DataError(sidecar_path(csv_path) + ": " + e.what());
    }
  } else {
    for (int c = 0; c <= max_label; ++c) d.class_names.push_back("class" + std::to_string(c));
  }
  validate(d);
  return d;
}

}  // namespace nfp
