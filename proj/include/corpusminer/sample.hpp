#pragma once

#include <cstdint>
#include <filesystem>

namespace cm::sample {

/// Writes a self-contained synthetic corpus for demos and end-to-end
/// tests: texts/<id>.txt, records.ndjson, entity lexicons and a
/// ready-to-run pipeline.toml. Five themed document groups map onto five
/// q-fin categories so reference-label evaluation works out of the box.
void generate(const std::filesystem::path& dir, std::size_t n_docs = 200,
              std::uint64_t seed = 7);

}  // namespace cm::sample
