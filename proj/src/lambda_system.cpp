#include "baw/lambda_system.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace baw {

std::string path_str(const TreePath& p) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) os << ',';
        os << p[i];
    }
    os << ')';
    return os.str();
}

bool lex_less(const TreePath& a, const TreePath& b) {
    std::size_t m = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < m; ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

bool is_prefix(const TreePath& p, const TreePath& q) {
    if (p.size() > q.size()) return false;
    return std::equal(p.begin(), p.end(), q.begin());
}

LambdaSystem::LambdaSystem(std::vector<SystemNode> nodes) {
    for (auto& n : nodes) {
        TreePath key = n.path;
        std::string label = path_str(key);
        if (!nodes_.emplace(std::move(key), std::move(n)).second)
            throw usage_error("duplicate tree node " + label);
    }
}

bool LambdaSystem::has(const TreePath& p) const { return nodes_.count(p) != 0; }

const SystemNode& LambdaSystem::node(const TreePath& p) const {
    auto it = nodes_.find(p);
    if (it == nodes_.end()) throw usage_error("no tree node " + path_str(p));
    return it->second;
}

std::vector<TreePath> LambdaSystem::finals() const {
    std::vector<TreePath> out;
    for (const auto& [p, n] : nodes_)
        if (n.rank == 0) out.push_back(p);
    return out;
}

namespace {

bool ascending_distinct(const std::vector<std::uint64_t>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i - 1] >= v[i]) return false;
    return true;
}

bool ascending_distinct32(const std::vector<std::uint32_t>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i - 1] >= v[i]) return false;
    return true;
}

} // namespace

std::vector<std::string> LambdaSystem::validate() const {
    std::vector<std::string> bad;
    if (!has(TreePath{})) bad.push_back("root node missing");

    for (const auto& [p, n] : nodes_) {
        if (!ascending_distinct(n.base))
            bad.push_back("base set of " + path_str(p) + " is not strictly ascending");
        if (!ascending_distinct32(n.children))
            bad.push_back("child list of " + path_str(p) + " is not strictly ascending");

        // The declared child-index list must match the materialized children.
        std::set<std::uint32_t> found;
        for (const auto& [q, m] : nodes_) {
            (void)m;
            if (q.size() == p.size() + 1 && is_prefix(p, q)) found.insert(q.back());
        }
        for (auto b : n.children) {
            if (!found.count(b))
                bad.push_back("declared child " + std::to_string(b) + " of " + path_str(p) +
                              " is not materialized");
        }
        for (auto b : found) {
            if (!std::binary_search(n.children.begin(), n.children.end(), b))
                bad.push_back("node " + path_str(p) + " is missing child index " +
                              std::to_string(b) + " in its declared list");
        }

        if (n.rank == 0 && !n.children.empty())
            bad.push_back("leaf " + path_str(p) + " declares children");
        if (n.rank > 0 && n.children.empty())
            bad.push_back("interior node " + path_str(p) + " has an empty child list");

        if (p.empty()) {
            if (!n.base.empty()) bad.push_back("root base set is not empty");
            continue;
        }

        TreePath par(p.begin(), p.end() - 1);
        auto it = nodes_.find(par);
        if (it == nodes_.end()) {
            bad.push_back("node " + path_str(p) + " has no parent node");
            continue;
        }
        const SystemNode& u = it->second;
        if (n.rank >= u.rank)
            bad.push_back("rank does not decrease from " + path_str(par) + " to " + path_str(p));
        if (n.base.size() < n.rank)
            bad.push_back("base set of " + path_str(p) + " is smaller than its rank");
        if (n.base.size() >= u.rank)
            bad.push_back("base set of " + path_str(p) + " is not below the rank of " +
                          path_str(par));
    }

    // Sibling base sets grow with the child index.
    for (const auto& [p, n] : nodes_) {
        const SystemNode* prev = nullptr;
        for (auto b : n.children) {
            TreePath q = p;
            q.push_back(b);
            auto it = nodes_.find(q);
            if (it == nodes_.end()) continue;
            if (prev && !std::includes(it->second.base.begin(), it->second.base.end(),
                                       prev->base.begin(), prev->base.end()))
                bad.push_back("base sets of the children of " + path_str(p) +
                              " do not increase at " + path_str(q));
            prev = &it->second;
        }
    }
    return bad;
}

std::optional<std::size_t> LambdaSystem::height() const {
    std::optional<std::size_t> h;
    for (const auto& [p, n] : nodes_) {
        if (n.rank != 0) continue;
        if (!h)
            h = p.size();
        else if (*h != p.size())
            return std::nullopt;
    }
    return h;
}

std::vector<std::uint64_t> LambdaSystem::base_closure(const TreePath& p) const {
    std::set<std::uint64_t> acc;
    for (std::size_t len = 0; len <= p.size(); ++len) {
        TreePath q(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(len));
        auto it = nodes_.find(q);
        if (it == nodes_.end()) continue;
        acc.insert(it->second.base.begin(), it->second.base.end());
    }
    return {acc.begin(), acc.end()};
}

std::vector<std::string> BasedFamily::validate() const {
    std::vector<std::string> bad = system.validate();
    if (n_blocks == 0 || block_width == 0) {
        bad.push_back("block geometry is degenerate");
        return bad;
    }
    auto leaves = system.finals();
    std::set<TreePath> leaf_set(leaves.begin(), leaves.end());
    for (const auto& p : leaves)
        if (!sets.count(p)) bad.push_back("leaf " + path_str(p) + " has no ground set");

    for (const auto& [p, s] : sets) {
        if (!leaf_set.count(p)) {
            bad.push_back("ground set attached to non-leaf " + path_str(p));
            continue;
        }
        if (s.size() != n_blocks * block_width)
            bad.push_back("ground set of " + path_str(p) + " has size " +
                          std::to_string(s.size()) + ", expected " +
                          std::to_string(n_blocks * block_width));
        std::set<std::uint64_t> uniq(s.begin(), s.end());
        if (uniq.size() != s.size())
            bad.push_back("ground set of " + path_str(p) + " has repeated entries");
        auto closure = system.base_closure(p);
        for (auto e : s) {
            if (!std::binary_search(closure.begin(), closure.end(), e)) {
                bad.push_back("ground set of " + path_str(p) +
                              " leaves its base closure at element " + std::to_string(e));
                break;
            }
        }
    }
    if (system.has(TreePath{})) {
        const auto& root = system.node(TreePath{});
        for (auto g : expected_gamma) {
            if (!std::binary_search(root.children.begin(), root.children.end(), g))
                bad.push_back("diagnostic marker " + std::to_string(g) +
                              " is not a root child index");
        }
    }
    return bad;
}

const std::vector<std::uint64_t>& BasedFamily::set_of(const TreePath& p) const {
    auto it = sets.find(p);
    if (it == sets.end()) throw usage_error("no ground set for " + path_str(p));
    return it->second;
}

std::vector<std::uint64_t> BasedFamily::block(const TreePath& p, std::size_t k) const {
    if (k >= n_blocks) throw usage_error("block index out of range");
    const auto& s = set_of(p);
    if (s.size() != n_blocks * block_width)
        throw usage_error("ground set of " + path_str(p) + " does not match the block geometry");
    return {s.begin() + static_cast<std::ptrdiff_t>(k * block_width),
            s.begin() + static_cast<std::ptrdiff_t>((k + 1) * block_width)};
}

namespace {

// Depth-first placement with deterministic candidate order and undo. The
// block clause alone is antitone in the placed set, but the fixed start and
// precedence constraints make dead ends order-dependent, so the search
// backtracks under a visit budget.
struct OrderSearch {
    const BasedFamily& f;
    ReshuffleParams prm;
    std::vector<TreePath> items;
    std::vector<bool> placed;
    std::vector<std::size_t> chosen;
    std::set<std::uint64_t> ground;
    std::size_t visited = 0;
    std::size_t deepest = 0;
    bool out_of_budget = false;

    OrderSearch(const BasedFamily& fam, const ReshuffleParams& p, std::vector<TreePath> it)
        : f(fam), prm(p), items(std::move(it)), placed(items.size(), false) {}
    virtual ~OrderSearch() = default;

    virtual bool may_follow(std::size_t) const { return true; }

    bool block_ok(const TreePath& p) const {
        for (std::size_t k = 0; k < f.n_blocks; ++k) {
            std::size_t overlap = 0;
            for (auto e : f.block(p, k)) overlap += ground.count(e);
            if (overlap <= prm.overlap_bound) return true;
        }
        return false;
    }

    void place(std::size_t i, std::vector<std::uint64_t>& added) {
        placed[i] = true;
        chosen.push_back(i);
        for (auto e : f.set_of(items[i]))
            if (ground.insert(e).second) added.push_back(e);
        deepest = std::max(deepest, chosen.size());
    }

    void unplace(std::size_t i, const std::vector<std::uint64_t>& added) {
        for (auto e : added) ground.erase(e);
        chosen.pop_back();
        placed[i] = false;
    }

    bool run() {
        if (chosen.size() == items.size()) return true;
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (placed[i] || !may_follow(i) || !block_ok(items[i])) continue;
            if (++visited > prm.node_budget) {
                out_of_budget = true;
                return false;
            }
            std::vector<std::uint64_t> added;
            place(i, added);
            if (run()) return true;
            unplace(i, added);
            if (out_of_budget) return false;
        }
        return false;
    }

    ReshuffleResult result() {
        ReshuffleResult r;
        r.visited = visited;
        if (chosen.size() == items.size()) {
            r.ok = true;
            for (auto i : chosen) r.order.push_back(items[i]);
        } else if (out_of_budget) {
            r.failure =
                "node budget exhausted after " + std::to_string(prm.node_budget) + " placements";
        } else {
            r.failure = "no admissible ordering within overlap bound " +
                        std::to_string(prm.overlap_bound) + " (deepest prefix " +
                        std::to_string(deepest) + " of " + std::to_string(items.size()) + ")";
        }
        return r;
    }
};

std::vector<TreePath> sorted_unique(std::vector<TreePath> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace

ReshuffleResult reshuffle_order(const BasedFamily& f, const std::vector<TreePath>& index_set,
                                const TreePath& first, const ReshuffleParams& params) {
    auto items = sorted_unique(index_set);
    if (items.size() != index_set.size()) throw usage_error("repeated path in index set");
    OrderSearch s(f, params, std::move(items));
    auto it = std::find(s.items.begin(), s.items.end(), first);
    if (it == s.items.end())
        throw usage_error("start node " + path_str(first) + " not in index set");
    // The start has no predecessors, so its block clause holds vacuously.
    std::vector<std::uint64_t> added;
    s.visited = 1;
    s.place(static_cast<std::size_t>(it - s.items.begin()), added);
    s.run();
    return s.result();
}

namespace {

struct BranchSearch : OrderSearch {
    TreePath mu;
    std::int64_t alpha;

    BranchSearch(const BasedFamily& fam, const ReshuffleParams& p, std::vector<TreePath> it,
                 TreePath m, std::int64_t a)
        : OrderSearch(fam, p, std::move(it)), mu(std::move(m)), alpha(a) {}

    bool before(const TreePath& v, const TreePath& e) const {
        if (!(is_prefix(mu, e) && e.size() > mu.size())) return false;
        if (lex_less(v, mu)) return true;
        return is_prefix(mu, v) && v.size() > mu.size() &&
               static_cast<std::int64_t>(v[mu.size()]) <= alpha &&
               alpha < static_cast<std::int64_t>(e[mu.size()]);
    }

    bool may_follow(std::size_t i) const override {
        for (std::size_t j = 0; j < items.size(); ++j) {
            if (j == i || placed[j]) continue;
            if (before(items[j], items[i])) return false;
        }
        return true;
    }
};

} // namespace

ReshuffleResult reshuffle_order_2(const BasedFamily& f, const TreePath& mu, std::int64_t alpha,
                                  const std::vector<TreePath>& index_set,
                                  const ReshuffleParams& params) {
    const SystemNode& m = f.system.node(mu);
    if (m.rank == 0) throw usage_error("branch point " + path_str(mu) + " must be interior");
    for (const auto& p : index_set) {
        if (!(is_prefix(mu, p) && p.size() > mu.size()))
            throw usage_error("index node " + path_str(p) + " does not extend " + path_str(mu));
        if (f.system.node(p).rank != 0)
            throw usage_error("index node " + path_str(p) + " is not a leaf");
    }
    std::vector<TreePath> items = index_set;
    for (const auto& p : f.system.finals())
        if (lex_less(p, mu)) items.push_back(p);
    BranchSearch s(f, params, sorted_unique(std::move(items)), mu, alpha);
    s.run();
    return s.result();
}

std::optional<std::string> check_order_blocks(const BasedFamily& f,
                                              const std::vector<TreePath>& order,
                                              std::size_t overlap_bound) {
    std::set<TreePath> seen;
    std::set<std::uint64_t> ground;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& p = order[i];
        if (!seen.insert(p).second) return "node " + path_str(p) + " appears twice";
        bool ok = false;
        for (std::size_t k = 0; k < f.n_blocks && !ok; ++k) {
            std::size_t overlap = 0;
            for (auto e : f.block(p, k)) overlap += ground.count(e);
            ok = overlap <= overlap_bound;
        }
        if (!ok)
            return "node " + path_str(p) + " at position " + std::to_string(i) +
                   " has no block within overlap bound " + std::to_string(overlap_bound);
        for (auto e : f.set_of(p)) ground.insert(e);
    }
    return std::nullopt;
}

std::optional<std::string> check_order_precedence(const BasedFamily& f, const TreePath& mu,
                                                  std::int64_t alpha,
                                                  const std::vector<TreePath>& order) {
    (void)f;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& e = order[i];
        if (!(is_prefix(mu, e) && e.size() > mu.size())) continue;
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const auto& v = order[j];
            bool required = lex_less(v, mu) ||
                            (is_prefix(mu, v) && v.size() > mu.size() &&
                             static_cast<std::int64_t>(v[mu.size()]) <= alpha &&
                             alpha < static_cast<std::int64_t>(e[mu.size()]));
            if (required) return "node " + path_str(v) + " must precede " + path_str(e);
        }
    }
    return std::nullopt;
}

} // namespace baw
