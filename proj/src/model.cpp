#include "onematch/model.hpp"

#include <algorithm>
#include <map>

#include "onematch/errors.hpp"

namespace onematch {

Dataset::Dataset(std::string name, Side side, std::vector<Entity> entities)
    : name_(std::move(name)), side_(side), entities_(std::move(entities)) {
    by_id_.reserve(entities_.size());
    for (std::size_t i = 0; i < entities_.size(); ++i) {
        const Entity& e = entities_[i];
        if (e.id.empty()) throw Error("model", "FieldError", "entity " + std::to_string(i + 1) + ": empty id");
        if (e.titles.empty()) throw Error("model", "FieldError", "entity '" + e.id + "': no titles");
        if (e.runtime && *e.runtime < 0)
            throw Error("model", "FieldError", "entity '" + e.id + "': negative runtime");
        auto [it, inserted] = by_id_.emplace(e.id, i);
        if (!inserted) throw Error("model", "DuplicateId", e.id);
    }
}

std::optional<std::size_t> Dataset::handle_of(const std::string& id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

std::vector<MatchingViolation> validate_matching(const Matching& m) {
    std::vector<MatchingViolation> violations;
    if (!m.constrained) return violations;

    std::map<std::string, std::vector<std::string>> by_left, by_right;
    for (const auto& p : m.pairs) {
        by_left[p.left].push_back(p.right);
        by_right[p.right].push_back(p.left);
    }
    for (auto& [id, partners] : by_left) {
        if (partners.size() > 1) {
            std::sort(partners.begin(), partners.end());
            violations.push_back({Side::Left, id, partners});
        }
    }
    for (auto& [id, partners] : by_right) {
        if (partners.size() > 1) {
            std::sort(partners.begin(), partners.end());
            violations.push_back({Side::Right, id, partners});
        }
    }
    return violations;
}

}  // namespace onematch
