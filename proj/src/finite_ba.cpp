#include "baw/finite_ba.hpp"

#include <atomic>
#include <cstdlib>
#include <limits>

namespace baw {

namespace {

std::atomic<AlgebraId> next_algebra_id{1};

std::size_t read_max_atoms() {
    if (const char* s = std::getenv("BAW_MAX_ATOMS")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end && *end == '\0' && v > 0 &&
            v <= std::numeric_limits<std::uint32_t>::max())
            return static_cast<std::size_t>(v);
    }
    return std::size_t{1} << 20;
}

// One refinement pass: split every label class by membership in e. Labels
// come out renumbered by first atom, so repeated passes stay canonical.
std::uint32_t refine_by(std::vector<std::uint32_t>& labels, std::uint32_t n_labels,
                        const AtomSet& e) {
    std::vector<std::uint32_t> remap(static_cast<std::size_t>(n_labels) * 2,
                                     std::numeric_limits<std::uint32_t>::max());
    std::uint32_t next = 0;
    for (std::size_t a = 0; a < labels.size(); ++a) {
        std::size_t key = static_cast<std::size_t>(labels[a]) * 2 + (e.test(a) ? 1 : 0);
        if (remap[key] == std::numeric_limits<std::uint32_t>::max()) remap[key] = next++;
        labels[a] = remap[key];
    }
    return next;
}

} // namespace

std::size_t max_atoms() {
    static const std::size_t cap = read_max_atoms();
    return cap;
}

FiniteBA::FiniteBA(std::size_t atom_count) : atom_count_(atom_count) {
    if (atom_count == 0) throw usage_error("algebra needs at least one atom");
    if (atom_count > max_atoms())
        throw capacity_error("atom count " + std::to_string(atom_count) +
                             " exceeds cap " + std::to_string(max_atoms()));
    id_ = next_algebra_id.fetch_add(1, std::memory_order_relaxed);
}

Elem FiniteBA::elem(const std::vector<std::size_t>& atoms) const {
    AtomSet s(atom_count_);
    for (auto a : atoms) s.set(a);
    return Elem(id_, std::move(s));
}

FreeAlgebra make_free(std::size_t n_gens) {
    if (n_gens >= 63) throw capacity_error("free algebra too large");
    std::size_t n_atoms = std::size_t{1} << n_gens;
    FiniteBA ba(n_atoms);
    std::vector<Elem> gens;
    gens.reserve(n_gens);
    for (std::size_t i = 0; i < n_gens; ++i) {
        AtomSet s(n_atoms);
        for (std::size_t m = 0; m < n_atoms; ++m)
            if (((m >> i) & 1) == 0) s.set(m);
        gens.push_back(ba.elem(std::move(s)));
    }
    return FreeAlgebra{std::move(ba), std::move(gens)};
}

Subalgebra from_atom_blocks(AlgebraId algebra, std::vector<std::uint32_t> atom_block) {
    if (atom_block.empty()) throw usage_error("empty atom-block map");
    // Renumber by first occurrence.
    std::uint32_t max_label = 0;
    for (auto l : atom_block) max_label = std::max(max_label, l);
    std::vector<std::uint32_t> remap(static_cast<std::size_t>(max_label) + 1,
                                     std::numeric_limits<std::uint32_t>::max());
    std::uint32_t next = 0;
    for (auto& l : atom_block) {
        if (remap[l] == std::numeric_limits<std::uint32_t>::max()) remap[l] = next++;
        l = remap[l];
    }

    Subalgebra s;
    s.algebra_ = algebra;
    s.atom_block_ = std::move(atom_block);
    s.block_offset_.assign(next + 1, 0);
    for (auto l : s.atom_block_) ++s.block_offset_[l + 1];
    for (std::size_t b = 0; b < next; ++b) s.block_offset_[b + 1] += s.block_offset_[b];
    s.block_atoms_.resize(s.atom_block_.size());
    std::vector<std::uint32_t> cursor(s.block_offset_.begin(), s.block_offset_.end() - 1);
    for (std::size_t a = 0; a < s.atom_block_.size(); ++a)
        s.block_atoms_[cursor[s.atom_block_[a]]++] = static_cast<std::uint32_t>(a);
    return s;
}

Subalgebra Subalgebra::generated(const FiniteBA& ambient, const std::vector<Elem>& gens) {
    std::vector<std::uint32_t> labels(ambient.atom_count(), 0);
    std::uint32_t n_labels = 1;
    for (const auto& g : gens) {
        ambient.check_owns(g);
        n_labels = refine_by(labels, n_labels, g.atoms);
    }
    return from_atom_blocks(ambient.id(), std::move(labels));
}

Subalgebra Subalgebra::trivial(const FiniteBA& ambient) {
    return generated(ambient, {});
}

Subalgebra Subalgebra::discrete(const FiniteBA& ambient) {
    std::vector<std::uint32_t> labels(ambient.atom_count());
    for (std::size_t a = 0; a < labels.size(); ++a)
        labels[a] = static_cast<std::uint32_t>(a);
    return from_atom_blocks(ambient.id(), std::move(labels));
}

AtomSet Subalgebra::block_set(std::size_t b) const {
    AtomSet s(atom_block_.size());
    for (auto p = block_begin(b); p != block_end(b); ++p) s.set(*p);
    return s;
}

Elem Subalgebra::lpr(const Elem& x) const {
    if (x.algebra != algebra_) throw usage_error("element of a different algebra");
    std::vector<std::uint32_t> hit(block_count(), 0);
    x.atoms.for_each([&](std::size_t a) { ++hit[atom_block_[a]]; });
    AtomSet out(atom_block_.size());
    for (std::size_t b = 0; b < block_count(); ++b)
        if (hit[b] == block_size(b))
            for (auto p = block_begin(b); p != block_end(b); ++p) out.set(*p);
    return Elem(algebra_, std::move(out));
}

Elem Subalgebra::upr(const Elem& x) const {
    if (x.algebra != algebra_) throw usage_error("element of a different algebra");
    std::vector<bool> hit(block_count(), false);
    x.atoms.for_each([&](std::size_t a) { hit[atom_block_[a]] = true; });
    AtomSet out(atom_block_.size());
    for (std::size_t b = 0; b < block_count(); ++b)
        if (hit[b])
            for (auto p = block_begin(b); p != block_end(b); ++p) out.set(*p);
    return Elem(algebra_, std::move(out));
}

bool Subalgebra::contains(const Elem& x) const {
    if (x.algebra != algebra_) throw usage_error("element of a different algebra");
    std::vector<std::uint32_t> hit(block_count(), 0);
    x.atoms.for_each([&](std::size_t a) { ++hit[atom_block_[a]]; });
    for (std::size_t b = 0; b < block_count(); ++b)
        if (hit[b] != 0 && hit[b] != block_size(b)) return false;
    return true;
}

Subalgebra Subalgebra::extended(const FiniteBA& ambient, const std::vector<Elem>& extra) const {
    if (ambient.id() != algebra_) throw usage_error("ambient algebra mismatch");
    std::vector<std::uint32_t> labels = atom_block_;
    std::uint32_t n_labels = static_cast<std::uint32_t>(block_count());
    for (const auto& g : extra) {
        ambient.check_owns(g);
        n_labels = refine_by(labels, n_labels, g.atoms);
    }
    return from_atom_blocks(algebra_, std::move(labels));
}

bool subalgebra_leq(const Subalgebra& coarse, const Subalgebra& fine) {
    if (coarse.algebra() != fine.algebra()) throw usage_error("subalgebras of different algebras");
    for (std::size_t b = 0; b < fine.block_count(); ++b) {
        auto p = fine.block_begin(b);
        std::uint32_t label = coarse.block_of(*p);
        for (++p; p != fine.block_end(b); ++p)
            if (coarse.block_of(*p) != label) return false;
    }
    return true;
}

Subalgebra subalgebra_meet(const Subalgebra& a, const Subalgebra& b) {
    if (a.algebra() != b.algebra()) throw usage_error("subalgebras of different algebras");
    std::size_t n = a.atom_count();
    std::vector<std::uint32_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::uint32_t>(i);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    auto unite = [&](std::uint32_t x, std::uint32_t y) { parent[find(x)] = find(y); };
    for (const Subalgebra* s : {&a, &b})
        for (std::size_t blk = 0; blk < s->block_count(); ++blk) {
            auto p = s->block_begin(blk);
            std::uint32_t head = *p;
            for (++p; p != s->block_end(blk); ++p) unite(*p, head);
        }
    std::vector<std::uint32_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = find(static_cast<std::uint32_t>(i));
    return from_atom_blocks(a.algebra(), labels);
}

bool is_independent_over(const FiniteBA& ambient, const Subalgebra& base,
                         const std::vector<Elem>& ws) {
    if (ambient.id() != base.algebra()) throw usage_error("ambient algebra mismatch");
    if (ws.size() > 40) return false;
    std::size_t want = base.block_count();
    for (std::size_t i = 0; i < ws.size(); ++i) {
        want *= 2;
        if (want > ambient.atom_count()) return false;
    }
    return base.extended(ambient, ws).block_count() == want;
}

std::optional<std::vector<Elem>> free_witness(const FiniteBA& ambient,
                                              const Subalgebra& fine,
                                              const Subalgebra& coarse) {
    if (ambient.id() != fine.algebra() || ambient.id() != coarse.algebra())
        throw usage_error("ambient algebra mismatch");
    if (!subalgebra_leq(coarse, fine))
        throw usage_error("free_witness: not a subalgebra pair");

    // Fine blocks inside each coarse block, in fine-block order (which is
    // first-atom ascending).
    std::vector<std::vector<std::uint32_t>> split(coarse.block_count());
    for (std::size_t b = 0; b < fine.block_count(); ++b)
        split[coarse.block_of(*fine.block_begin(b))].push_back(static_cast<std::uint32_t>(b));

    std::size_t per = split.empty() ? 0 : split[0].size();
    for (const auto& v : split)
        if (v.size() != per) return std::nullopt;
    if (per == 0 || (per & (per - 1)) != 0) return std::nullopt;

    std::size_t m = 0;
    while ((std::size_t{1} << m) < per) ++m;

    std::vector<Elem> ws;
    ws.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        AtomSet s(ambient.atom_count());
        for (const auto& v : split)
            for (std::size_t i = 0; i < v.size(); ++i)
                if (((i >> j) & 1) == 0)
                    for (auto p = fine.block_begin(v[i]); p != fine.block_end(v[i]); ++p)
                        s.set(*p);
        ws.push_back(ambient.elem(std::move(s)));
    }
    return ws;
}

bool is_free_over(const FiniteBA& ambient, const Subalgebra& fine,
                  const Subalgebra& coarse) {
    return free_witness(ambient, fine, coarse).has_value();
}

Morphism::Morphism(const FiniteBA& source, const FiniteBA& target,
                   std::vector<std::uint32_t> fiber)
    : source_(source.id()), target_(target.id()),
      source_atoms_(source.atom_count()), fiber_(std::move(fiber)) {
    if (fiber_.size() != target.atom_count())
        throw usage_error("fiber size must match target atom count");
    for (auto s : fiber_)
        if (s >= source_atoms_) throw usage_error("fiber entry out of range");
}

Morphism Morphism::identity(const FiniteBA& a) {
    std::vector<std::uint32_t> f(a.atom_count());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<std::uint32_t>(i);
    return Morphism(a, a, std::move(f));
}

Elem Morphism::map(const Elem& x) const {
    if (x.algebra != source_) throw usage_error("element not in morphism source");
    AtomSet out(fiber_.size());
    for (std::size_t t = 0; t < fiber_.size(); ++t)
        if (x.atoms.test(fiber_[t])) out.set(t);
    return Elem(target_, std::move(out));
}

bool Morphism::injective() const {
    std::vector<bool> seen(source_atoms_, false);
    for (auto s : fiber_) seen[s] = true;
    for (bool b : seen)
        if (!b) return false;
    return true;
}

Subalgebra Morphism::image() const {
    return from_atom_blocks(target_, fiber_);
}

Elem Morphism::preimage_lower(const Elem& y, const FiniteBA& source_ba) const {
    if (y.algebra != target_) throw usage_error("element not in morphism target");
    if (source_ba.id() != source_) throw usage_error("source algebra mismatch");
    std::vector<bool> bad(source_atoms_, false);
    for (std::size_t t = 0; t < fiber_.size(); ++t)
        if (!y.atoms.test(t)) bad[fiber_[t]] = true;
    AtomSet out(source_atoms_);
    for (std::size_t s = 0; s < source_atoms_; ++s)
        if (!bad[s]) out.set(s);
    return Elem(source_, std::move(out));
}

Morphism Morphism::compose(const Morphism& g, const Morphism& f) {
    if (g.source_ != f.target_) throw usage_error("morphisms do not compose");
    Morphism r;
    r.source_ = f.source_;
    r.target_ = g.target_;
    r.source_atoms_ = f.source_atoms_;
    r.fiber_.resize(g.fiber_.size());
    for (std::size_t t = 0; t < g.fiber_.size(); ++t) r.fiber_[t] = f.fiber_[g.fiber_[t]];
    return r;
}

CoproductResult coproduct(const std::vector<const FiniteBA*>& factors) {
    if (factors.empty()) throw usage_error("coproduct of no factors");
    std::size_t total = 1;
    for (const auto* f : factors) {
        if (f->atom_count() > max_atoms() / total)
            throw capacity_error("coproduct exceeds atom cap");
        total *= f->atom_count();
    }
    FiniteBA ba(total);
    std::vector<Morphism> inject;
    inject.reserve(factors.size());
    std::size_t stride = total;
    for (const auto* f : factors) {
        std::size_t n = f->atom_count();
        stride /= n;
        std::vector<std::uint32_t> fiber(total);
        for (std::size_t t = 0; t < total; ++t)
            fiber[t] = static_cast<std::uint32_t>(t / stride % n);
        inject.emplace_back(*f, ba, std::move(fiber));
    }
    return CoproductResult{std::move(ba), std::move(inject)};
}

CoproductResult coproduct(const FiniteBA& a, const FiniteBA& b) {
    return coproduct(std::vector<const FiniteBA*>{&a, &b});
}

QuotientResult quotient_by_element(const FiniteBA& a, const Elem& r) {
    a.check_owns(r);
    if (r.is_one()) throw degenerate_quotient_error("quotient by the unit collapses");
    std::vector<std::uint32_t> fiber;
    fiber.reserve(a.atom_count() - r.atoms.count());
    for (std::size_t s = 0; s < a.atom_count(); ++s)
        if (!r.atoms.test(s)) fiber.push_back(static_cast<std::uint32_t>(s));
    FiniteBA q(fiber.size());
    Morphism proj(a, q, std::move(fiber));
    return QuotientResult{std::move(q), std::move(proj)};
}

AdjoinResult adjoin_element(const FiniteBA& a, const Elem& below, const Elem& disjoint) {
    a.check_owns(below);
    a.check_owns(disjoint);
    if ((below * disjoint).atoms.any())
        throw inconsistent_extension_error("adjoin_element: bounds overlap");

    std::vector<std::uint32_t> fiber;
    for (std::size_t s = 0; s < a.atom_count(); ++s)
        if (!disjoint.atoms.test(s)) fiber.push_back(static_cast<std::uint32_t>(s));
    std::size_t n_left = fiber.size();
    for (std::size_t s = 0; s < a.atom_count(); ++s)
        if (!below.atoms.test(s)) fiber.push_back(static_cast<std::uint32_t>(s));

    FiniteBA ext(fiber.size());
    AtomSet xs(fiber.size());
    for (std::size_t t = 0; t < n_left; ++t) xs.set(t);
    Elem x = ext.elem(std::move(xs));
    Morphism embed(a, ext, std::move(fiber));
    return AdjoinResult{std::move(ext), std::move(embed), std::move(x)};
}

} // namespace baw
