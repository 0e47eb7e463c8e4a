#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cm::harvest {

/// "domain.SUBCAT" category codes; the nine q-fin codes act as reference
/// labels downstream.
bool is_valid_category_code(const std::string& code);
bool is_qfin_category(const std::string& code);
const std::vector<std::string>& qfin_categories();

/// One paper's metadata. `id` carries no version suffix.
struct DocumentRecord {
  std::string id;
  std::string title;
  std::vector<std::string> authors;
  std::vector<std::string> all_categories;  // submission order
  std::optional<std::string> reference_category;
  int year = 0;  // submission year
  std::string abstract;
  std::optional<std::string> doi;
  std::optional<std::string> updated;  // YYYY-MM-DD

  /// Checks the record invariants (nonempty id, valid year, reference
  /// category consistency); throws on violation.
  void validate() const;
};

/// First category whose domain part is q-fin; absent when none is.
std::optional<std::string> assign_reference_category(
    const std::vector<std::string>& all_categories);

/// Idempotent upsert into a newline-delimited JSON store, keyed by id.
/// Records are kept sorted by id; a duplicate id within one call warns
/// and keeps the last occurrence. Returns the number of distinct ids
/// applied from this batch. An empty batch leaves the store untouched.
std::size_t store_records(const std::vector<DocumentRecord>& records,
                          const std::filesystem::path& store_path);

std::vector<DocumentRecord> load_records(const std::filesystem::path& store_path);

}  // namespace cm::harvest
