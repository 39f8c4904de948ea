#pragma once

#include "pb/model.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace pb {

// META rows in file order, plus a namespaced side table that preserves
// everything the core model does not carry (extra PROJECTS/VOTES columns,
// voter ids, column headers) so that serialize ∘ parse is the identity.
struct ElectionMetadata {
    std::vector<std::pair<std::string, std::string>> entries;
    std::map<std::string, std::string> extra;

    const std::string* find(const std::string& key) const;
    void set(const std::string& key, const std::string& value);

    bool operator==(const ElectionMetadata&) const = default;
};

struct ParseResult {
    Instance instance;
    Profile profile;
    ElectionMetadata meta;
    // One entry per project dropped for costing more than the budget limit.
    std::vector<std::string> warnings;
};

// Parses a Pabulib `.pb` document (sections META / PROJECTS / VOTES, each with
// a semicolon-separated column-header row). vote_type selects the ballot
// variant: approval, ordinal, cumulative, scoring. Cumulative point columns
// are normalized to weights summing to at most 1 (dividing by META
// max_sum_points when present, else by the voter's own point total).
// Projects costing more than the budget are dropped with a warning.
// Errors carry 1-based line numbers: MissingSection, MissingColumn,
// NonPositiveCost, DuplicateProjectId, UnknownVoteType, MalformedNumber.
ParseResult parse_pabulib(const std::string& text);

// Inverse of parse_pabulib; emits LF line endings, rationals in shortest exact
// form. Throws Error("InconsistentInputs") when the triple is not mutually
// consistent (empty profile, vote_type mismatch, ballots out of range).
std::string serialize_pabulib(const Instance& in, const Profile& prof,
                              const ElectionMetadata& meta);

} // namespace pb
