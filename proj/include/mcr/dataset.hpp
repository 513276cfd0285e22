#pragma once

#include "mcr/prompt_state.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mcr {

// One benchmark query. OpenCatalysis entries carry a single adsorbate symbol
// and default to k = 5; BioFuelQR entries always score against CO2 and H2 and
// default to k = 3.
struct DatasetEntry {
    std::string id;
    QueryKind kind = QueryKind::open_catalysis;
    std::vector<std::string> adsorbates;
    std::optional<std::string> question_text;
    int top_k = 5;

    RootQuery to_query() const;
};

// Reads a JSONL dataset: one object per line, e.g.
//   {"id":"oc-001","kind":"open_catalysis","adsorbate":"*OH"}
//   {"id":"bqr-001","kind":"biofuel_qr","question":"...","k":3}
// Throws schema_error (with the offending line number) and duplicate_id.
std::vector<DatasetEntry> load_dataset(const std::filesystem::path& path);

} // namespace mcr
