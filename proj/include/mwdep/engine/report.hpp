#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "../places.hpp"

namespace mwdep {

enum class Verdict {
    member_mod_torsion,
    non_member_with_witness_place,
    exact_member,
    exact_non_member_by_heights,
};

inline std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::member_mod_torsion: return "member-mod-torsion";
    case Verdict::non_member_with_witness_place: return "non-member-with-witness-place";
    case Verdict::exact_member: return "exact-member";
    case Verdict::exact_non_member_by_heights: return "exact-non-member-by-heights";
    }
    return "?";
}

struct PlaceRecord {
    enum class Status { member, non_member, skipped };

    Place place;
    Status status = Status::skipped;
    std::vector<std::string> witness;   // coefficients, when member
    std::string note;
};

inline std::string status_name(PlaceRecord::Status s) {
    switch (s) {
    case PlaceRecord::Status::member: return "member";
    case PlaceRecord::Status::non_member: return "non-member";
    case PlaceRecord::Status::skipped: return "skipped";
    }
    return "?";
}

struct EvidenceReport {
    std::string instance;
    std::vector<PlaceRecord> places;
    Verdict verdict = Verdict::member_mod_torsion;
    nlohmann::json parameters = nlohmann::json::object();
    nlohmann::json certificate = nlohmann::json::object();
    std::optional<u64> first_witness_prime;
    bool consistent = true;

    std::size_t count(PlaceRecord::Status s) const {
        std::size_t n = 0;
        for (auto& r : places) n += r.status == s;
        return n;
    }
};

struct DensityEstimate {
    std::string condition;
    u64 tested = 0;
    u64 satisfying = 0;
    double ratio() const { return tested == 0 ? 0.0 : static_cast<double>(satisfying) / static_cast<double>(tested); }
};

inline nlohmann::json to_json(const Place& v) {
    nlohmann::json j{{"p", v.p}, {"kind", kind_name(v.kind)}};
    if (v.kind == Place::Kind::split) j["s"] = v.s;
    return j;
}

inline nlohmann::json to_json(const PlaceRecord& r) {
    nlohmann::json j{{"place", to_json(r.place)}, {"status", status_name(r.status)}};
    if (!r.witness.empty()) j["witness"] = r.witness;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline nlohmann::json to_json(const EvidenceReport& rep) {
    nlohmann::json places = nlohmann::json::array();
    for (auto& r : rep.places) places.push_back(to_json(r));
    nlohmann::json j{
        {"instance", rep.instance},
        {"verdict", verdict_name(rep.verdict)},
        {"parameters", rep.parameters},
        {"certificate", rep.certificate},
        {"places", places},
        {"counts",
         {{"member", rep.count(PlaceRecord::Status::member)},
          {"non_member", rep.count(PlaceRecord::Status::non_member)},
          {"skipped", rep.count(PlaceRecord::Status::skipped)}}},
        {"consistent", rep.consistent},
    };
    j["first_witness_prime"] = rep.first_witness_prime ? nlohmann::json(*rep.first_witness_prime) : nlohmann::json(nullptr);
    return j;
}

inline nlohmann::json to_json(const DensityEstimate& d) {
    return {{"condition", d.condition}, {"tested", d.tested}, {"satisfying", d.satisfying}, {"ratio", d.ratio()}};
}

/// Sorts records by (p, kind, s) and fills first_witness_prime.
inline void finalize(EvidenceReport& rep) {
    std::stable_sort(rep.places.begin(), rep.places.end(), [](const PlaceRecord& a, const PlaceRecord& b) {
        if (a.place.p != b.place.p) return a.place.p < b.place.p;
        if (a.place.kind != b.place.kind) return a.place.kind < b.place.kind;
        return a.place.s < b.place.s;
    });
    rep.first_witness_prime.reset();
    for (auto& r : rep.places)
        if (r.status == PlaceRecord::Status::non_member) {
            rep.first_witness_prime = r.place.p;
            break;
        }
}

} // namespace mwdep
