#include "corpusminer/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "corpusminer/io_util.hpp"
#include "json.hpp"

namespace cm::metrics {

namespace {

std::vector<std::size_t> compact_labels(const std::vector<int>& labels,
                                        std::size_t& k_out) {
  std::unordered_map<int, std::size_t> ids;
  std::vector<std::size_t> compact;
  compact.reserve(labels.size());
  for (int l : labels) {
    auto [it, inserted] = ids.emplace(l, ids.size());
    compact.push_back(it->second);
  }
  k_out = ids.size();
  return compact;
}

double pairs2(std::size_t m) {
  return static_cast<double>(m) * static_cast<double>(m - 1) / 2.0;
}

}  // namespace

ContingencyTable ContingencyTable::build(const std::vector<int>& true_labels,
                                         const std::vector<int>& pred_labels) {
  if (true_labels.size() != pred_labels.size()) {
    throw std::invalid_argument("label vectors differ in length");
  }
  if (true_labels.size() < 2) {
    throw std::invalid_argument("need at least two samples");
  }
  ContingencyTable table;
  table.n = true_labels.size();
  const auto ti = compact_labels(true_labels, table.k_true);
  const auto pi = compact_labels(pred_labels, table.k_pred);
  table.cells.assign(table.k_true * table.k_pred, 0);
  table.row_sums.assign(table.k_true, 0);
  table.col_sums.assign(table.k_pred, 0);
  for (std::size_t s = 0; s < table.n; ++s) {
    ++table.cells[ti[s] * table.k_pred + pi[s]];
    ++table.row_sums[ti[s]];
    ++table.col_sums[pi[s]];
  }
  return table;
}

double rand_score(const std::vector<int>& true_labels,
                  const std::vector<int>& pred_labels) {
  const auto t = ContingencyTable::build(true_labels, pred_labels);
  double same_same = 0.0;
  for (std::size_t c : t.cells) same_same += pairs2(c);
  double same_true = 0.0, same_pred = 0.0;
  for (std::size_t r : t.row_sums) same_true += pairs2(r);
  for (std::size_t c : t.col_sums) same_pred += pairs2(c);
  const double all = pairs2(t.n);
  // Agreements: pairs together in both plus pairs separated in both.
  return (all + 2.0 * same_same - same_true - same_pred) / all;
}

double adjusted_rand_score(const std::vector<int>& true_labels,
                           const std::vector<int>& pred_labels) {
  const auto t = ContingencyTable::build(true_labels, pred_labels);
  double index = 0.0;
  for (std::size_t c : t.cells) index += pairs2(c);
  double a = 0.0, b = 0.0;
  for (std::size_t r : t.row_sums) a += pairs2(r);
  for (std::size_t c : t.col_sums) b += pairs2(c);
  const double expected = a * b / pairs2(t.n);
  const double max_index = (a + b) / 2.0;
  if (std::abs(max_index - expected) < 1e-12) return 1.0;
  return (index - expected) / (max_index - expected);
}

double mutual_info(const std::vector<int>& true_labels,
                   const std::vector<int>& pred_labels) {
  const auto t = ContingencyTable::build(true_labels, pred_labels);
  const double n = static_cast<double>(t.n);
  double mi = 0.0;
  for (std::size_t i = 0; i < t.k_true; ++i) {
    for (std::size_t j = 0; j < t.k_pred; ++j) {
      const double nij = static_cast<double>(t.at(i, j));
      if (nij == 0.0) continue;
      const double ai = static_cast<double>(t.row_sums[i]);
      const double bj = static_cast<double>(t.col_sums[j]);
      mi += (nij / n) * std::log(n * nij / (ai * bj));
    }
  }
  return std::max(mi, 0.0);
}

namespace {
double entropy(const std::vector<std::size_t>& sums, std::size_t n) {
  double h = 0.0;
  for (std::size_t s : sums) {
    if (s == 0) continue;
    const double p = static_cast<double>(s) / static_cast<double>(n);
    h -= p * std::log(p);
  }
  return h;
}
}  // namespace

double normalized_mutual_info(const std::vector<int>& true_labels,
                              const std::vector<int>& pred_labels,
                              NmiNorm norm) {
  const auto t = ContingencyTable::build(true_labels, pred_labels);
  const double ht = entropy(t.row_sums, t.n);
  const double hp = entropy(t.col_sums, t.n);
  double denom = 0.0;
  switch (norm) {
    case NmiNorm::arithmetic: denom = (ht + hp) / 2.0; break;
    case NmiNorm::geometric: denom = std::sqrt(ht * hp); break;
    case NmiNorm::min: denom = std::min(ht, hp); break;
    case NmiNorm::max: denom = std::max(ht, hp); break;
  }
  if (denom <= 0.0) {
    // Both entropies zero means both labelings are single-class; under
    // min/geometric one zero entropy also forces MI = 0, reported as 0
    // unless the labelings are both degenerate.
    return ht == 0.0 && hp == 0.0 ? 1.0 : 0.0;
  }
  return mutual_info(true_labels, pred_labels) / denom;
}

std::vector<std::size_t> hungarian_max_assignment(
    const std::vector<std::int64_t>& matrix, std::size_t size) {
  // Minimizing Kuhn-Munkres with row/column potentials, run on costs
  // (max_value - value). 1-based internally; index 0 is the sentinel.
  std::int64_t max_value = 0;
  for (auto value : matrix) max_value = std::max(max_value, value);
  const int n = static_cast<int>(size);
  auto cost = [&](int i, int j) {
    return max_value - matrix[static_cast<std::size_t>(i - 1) * size +
                              static_cast<std::size_t>(j - 1)];
  };

  const std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<std::int64_t> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      std::int64_t delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> row_to_col(size, 0);
  for (int j = 1; j <= n; ++j) {
    if (p[j] > 0) row_to_col[p[j] - 1] = static_cast<std::size_t>(j - 1);
  }
  return row_to_col;
}

double cluster_accuracy(const std::vector<int>& true_labels,
                        const std::vector<int>& pred_labels) {
  const auto t = ContingencyTable::build(true_labels, pred_labels);
  const std::size_t size = std::max(t.k_true, t.k_pred);
  std::vector<std::int64_t> square(size * size, 0);
  for (std::size_t i = 0; i < t.k_true; ++i) {
    for (std::size_t j = 0; j < t.k_pred; ++j) {
      square[i * size + j] = static_cast<std::int64_t>(t.at(i, j));
    }
  }
  const auto match = hungarian_max_assignment(square, size);
  std::int64_t matched = 0;
  for (std::size_t i = 0; i < size; ++i) {
    matched += square[i * size + match[i]];
  }
  return static_cast<double>(matched) / static_cast<double>(t.n);
}

double purity_score(const std::vector<int>& true_labels,
                    const std::vector<int>& pred_labels) {
  const auto t = ContingencyTable::build(true_labels, pred_labels);
  std::size_t total = 0;
  for (std::size_t j = 0; j < t.k_pred; ++j) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < t.k_true; ++i) {
      best = std::max(best, t.at(i, j));
    }
    total += best;
  }
  return static_cast<double>(total) / static_cast<double>(t.n);
}

MetricReport evaluate_all(const std::vector<int>& true_labels,
                          const std::vector<int>& pred_labels) {
  const auto t = ContingencyTable::build(true_labels, pred_labels);
  MetricReport report;
  report.n = t.n;
  report.k_true = t.k_true;
  report.k_pred = t.k_pred;
  report.rs = rand_score(true_labels, pred_labels);
  report.ars = adjusted_rand_score(true_labels, pred_labels);
  report.mi = mutual_info(true_labels, pred_labels);
  report.nmi = normalized_mutual_info(true_labels, pred_labels);
  report.ca = cluster_accuracy(true_labels, pred_labels);
  report.ps = purity_score(true_labels, pred_labels);
  return report;
}

void MetricReport::save_json(const std::filesystem::path& path) const {
  nlohmann::ordered_json j;
  j["rs"] = rs;
  j["ars"] = ars;
  j["mi"] = mi;
  j["nmi"] = nmi;
  j["ca"] = ca;
  j["ps"] = ps;
  j["n"] = n;
  j["k_true"] = k_true;
  j["k_pred"] = k_pred;
  write_file(path, j.dump(2) + "\n");
}

}  // namespace cm::metrics
