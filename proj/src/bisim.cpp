#include "parlog/bisim.hpp"

#include <algorithm>

#include "parlog/errors.hpp"

namespace parlog {

std::size_t ClassPool::VecHash::operator()(const std::vector<ClassId>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (ClassId c : v) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ClassPool::ClassPool(std::vector<AtomId> atoms, int depth)
    : atoms_(sort_atoms(std::move(atoms))), depth_(depth) {
    if (depth < 0)
        throw InternalError("negative bisimulation depth");
    if (atoms_.size() > 32)
        throw LimitError("more than 32 atoms in a class pool");
    sets_.resize(depth);
    set_ids_.resize(depth);
}

ClassId ClassPool::intern_mask(std::uint32_t mask) {
    auto [it, fresh] = mask_ids_.emplace(mask, static_cast<ClassId>(masks_.size()));
    if (fresh)
        masks_.push_back(mask);
    return it->second;
}

ClassId ClassPool::intern_set(int depth, std::vector<ClassId> members) {
    auto& table = set_ids_.at(depth - 1);
    auto [it, fresh] = table.emplace(members, static_cast<ClassId>(sets_[depth - 1].size()));
    if (fresh)
        sets_[depth - 1].push_back(std::move(members));
    return it->second;
}

std::optional<ClassId> ClassPool::find_mask(std::uint32_t mask) const {
    auto it = mask_ids_.find(mask);
    if (it == mask_ids_.end())
        return std::nullopt;
    return it->second;
}

std::optional<ClassId> ClassPool::find_set(int depth, const std::vector<ClassId>& members) const {
    const auto& table = set_ids_.at(depth - 1);
    auto it = table.find(members);
    if (it == table.end())
        return std::nullopt;
    return it->second;
}

const std::vector<ClassId>& ClassPool::members_of(int depth, ClassId c) const {
    return sets_.at(depth - 1).at(c);
}

std::size_t ClassPool::count(int depth) const {
    return depth == 0 ? masks_.size() : sets_.at(depth - 1).size();
}

bool ClassPool::leq(int depth, ClassId a, ClassId b) const {
    if (a == b)
        return true;
    if (depth == 0)
        return (masks_[b] & ~masks_[a]) == 0;
    const auto& ma = members_of(depth, a);
    const auto& mb = members_of(depth, b);
    return std::includes(mb.begin(), mb.end(), ma.begin(), ma.end());
}

std::vector<std::uint32_t> ClassPool::node_masks(const KripkeModel& k) const {
    std::vector<std::uint32_t> m(k.size(), 0);
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const Bits& fs = k.force_set(atom(atoms_[i]));
        for (int w = 0; w < k.size(); ++w)
            if (fs.test(w))
                m[w] |= 1u << i;
    }
    return m;
}

std::vector<std::vector<ClassId>> ClassPool::chains(const KripkeModel& k) {
    std::vector<std::uint32_t> masks = node_masks(k);
    std::vector<std::vector<ClassId>> nf(depth_ + 1, std::vector<ClassId>(k.size()));
    for (int w = 0; w < k.size(); ++w)
        nf[0][w] = intern_mask(masks[w]);
    for (int l = 1; l <= depth_; ++l)
        for (int w = 0; w < k.size(); ++w) {
            std::vector<ClassId> cone;
            k.up(w).for_each([&](std::size_t v) { cone.push_back(nf[l - 1][v]); });
            std::sort(cone.begin(), cone.end());
            cone.erase(std::unique(cone.begin(), cone.end()), cone.end());
            nf[l][w] = intern_set(l, std::move(cone));
        }
    return nf;
}

std::optional<std::vector<std::vector<ClassId>>>
ClassPool::chains_frozen(const KripkeModel& k) const {
    std::vector<std::uint32_t> masks = node_masks(k);
    std::vector<std::vector<ClassId>> nf(depth_ + 1, std::vector<ClassId>(k.size()));
    for (int w = 0; w < k.size(); ++w) {
        auto c = find_mask(masks[w]);
        if (!c)
            return std::nullopt;
        nf[0][w] = *c;
    }
    for (int l = 1; l <= depth_; ++l)
        for (int w = 0; w < k.size(); ++w) {
            std::vector<ClassId> cone;
            k.up(w).for_each([&](std::size_t v) { cone.push_back(nf[l - 1][v]); });
            std::sort(cone.begin(), cone.end());
            cone.erase(std::unique(cone.begin(), cone.end()), cone.end());
            auto c = find_set(l, cone);
            if (!c)
                return std::nullopt;
            nf[l][w] = *c;
        }
    return nf;
}

std::optional<ClassId> ClassPool::class_of_frozen(const KripkeModel& k) const {
    auto nf = chains_frozen(k);
    if (!nf)
        return std::nullopt;
    return (*nf)[depth_].at(k.root());
}

} // namespace parlog
