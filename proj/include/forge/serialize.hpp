#pragma once

#include "json.hpp"

#include "forge/circuit.hpp"
#include "forge/search.hpp"
#include "forge/vqe.hpp"

namespace forge {

void to_json(nlohmann::json& j, const GenomeBlock& b);
void from_json(const nlohmann::json& j, GenomeBlock& b);

/// Genomes serialize as their bracket text.
void to_json(nlohmann::json& j, const AnsatzGenome& g);
void from_json(const nlohmann::json& j, AnsatzGenome& g);

void to_json(nlohmann::json& j, const InitStrategy& s);
void from_json(const nlohmann::json& j, InitStrategy& s);

/// Missing fields keep their defaults on input.
void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

void to_json(nlohmann::json& j, const EpochEnergy& e);
void from_json(const nlohmann::json& j, EpochEnergy& e);

void to_json(nlohmann::json& j, const TrainReport& r);
void from_json(const nlohmann::json& j, TrainReport& r);

void to_json(nlohmann::json& j, const SearchConfig& c);
void from_json(const nlohmann::json& j, SearchConfig& c);

void to_json(nlohmann::json& j, const HistoryEntry& e);
void from_json(const nlohmann::json& j, HistoryEntry& e);

void to_json(nlohmann::json& j, const FeedbackNote& n);
void from_json(const nlohmann::json& j, FeedbackNote& n);

void to_json(nlohmann::json& j, const SearchHistory& h);
void from_json(const nlohmann::json& j, SearchHistory& h);

void to_json(nlohmann::json& j, const IterationRecord& r);
void from_json(const nlohmann::json& j, IterationRecord& r);

void to_json(nlohmann::json& j, const SearchReport& r);
void from_json(const nlohmann::json& j, SearchReport& r);

SearchStatus search_status_from_string(std::string_view s);

/// `{"error": {"kind": ..., "message": ...}}`
nlohmann::json error_json(std::string_view kind, std::string_view message);

}  // namespace forge
