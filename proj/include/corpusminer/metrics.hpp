#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace cm::metrics {

/// Joint label counts n_ij = |true class i intersect predicted cluster j|
/// with marginals; shared intermediate for all six agreement measures.
struct ContingencyTable {
  std::size_t n = 0;
  std::size_t k_true = 0;
  std::size_t k_pred = 0;
  std::vector<std::size_t> cells;  // k_true x k_pred, row-major
  std::vector<std::size_t> row_sums;
  std::vector<std::size_t> col_sums;

  std::size_t at(std::size_t i, std::size_t j) const {
    return cells[i * k_pred + j];
  }

  /// Label values may be arbitrary ints; they are compacted in order of
  /// first appearance. Throws on length mismatch or n < 2.
  static ContingencyTable build(const std::vector<int>& true_labels,
                                const std::vector<int>& pred_labels);
};

double rand_score(const std::vector<int>& true_labels,
                  const std::vector<int>& pred_labels);
double adjusted_rand_score(const std::vector<int>& true_labels,
                           const std::vector<int>& pred_labels);
/// Natural-log mutual information.
double mutual_info(const std::vector<int>& true_labels,
                   const std::vector<int>& pred_labels);

/// How the two label entropies combine into the NMI denominator.
enum class NmiNorm { arithmetic, geometric, min, max };

/// MI normalized by a mean of the two label entropies (arithmetic by
/// default); defined as 1 when both labelings are single-class.
double normalized_mutual_info(const std::vector<int>& true_labels,
                              const std::vector<int>& pred_labels,
                              NmiNorm norm = NmiNorm::arithmetic);
/// Best one-to-one cluster/class matching (Hungarian on the contingency
/// table, zero-padded to square) divided by n.
double cluster_accuracy(const std::vector<int>& true_labels,
                        const std::vector<int>& pred_labels);
double purity_score(const std::vector<int>& true_labels,
                    const std::vector<int>& pred_labels);

struct MetricReport {
  double rs = 0.0;
  double ars = 0.0;
  double mi = 0.0;
  double nmi = 0.0;
  double ca = 0.0;
  double ps = 0.0;
  std::size_t n = 0;
  std::size_t k_true = 0;
  std::size_t k_pred = 0;

  /// JSON object keyed in table column order rs, ars, mi, nmi, ca, ps.
  void save_json(const std::filesystem::path& path) const;
};

MetricReport evaluate_all(const std::vector<int>& true_labels,
                          const std::vector<int>& pred_labels);

/// Maximum-sum assignment of a square nonnegative matrix (row-major,
/// size x size). Returns the chosen column per row.
std::vector<std::size_t> hungarian_max_assignment(
    const std::vector<std::int64_t>& matrix, std::size_t size);

}  // namespace cm::metrics
