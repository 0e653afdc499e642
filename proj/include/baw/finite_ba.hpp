#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "baw/atom_set.hpp"
#include "baw/errors.hpp"

namespace baw {

using AlgebraId = std::uint64_t;

// Hard ceiling on atom counts, configurable through BAW_MAX_ATOMS.
std::size_t max_atoms();

class FiniteBA;

// Element of a specific algebra, stored as its set of atoms. The algebra id
// is carried along so cross-algebra arithmetic is rejected instead of
// silently producing nonsense.
struct Elem {
    AlgebraId algebra = 0;
    AtomSet atoms;

    Elem() = default;
    Elem(AlgebraId a, AtomSet s) : algebra(a), atoms(std::move(s)) {}

    bool is_zero() const { return atoms.none(); }
    bool is_one() const { return atoms.count() == atoms.size_bits(); }

    Elem complement() const { return Elem(algebra, atoms.complement()); }

    friend Elem operator*(const Elem& a, const Elem& b) {
        check_pair(a, b);
        return Elem(a.algebra, a.atoms & b.atoms);
    }
    friend Elem operator+(const Elem& a, const Elem& b) {
        check_pair(a, b);
        return Elem(a.algebra, a.atoms | b.atoms);
    }
    Elem operator-() const { return complement(); }
    // a - b is a * -b.
    friend Elem operator-(const Elem& a, const Elem& b) {
        check_pair(a, b);
        return Elem(a.algebra, a.atoms.minus(b.atoms));
    }
    friend bool operator<=(const Elem& a, const Elem& b) {
        check_pair(a, b);
        return a.atoms.subset_of(b.atoms);
    }
    friend bool operator==(const Elem& a, const Elem& b) {
        return a.algebra == b.algebra && a.atoms == b.atoms;
    }
    friend bool operator!=(const Elem& a, const Elem& b) { return !(a == b); }

    // x^0 is x, x^1 is the complement. Used everywhere products over sign
    // vectors are formed; keep consistent with free-algebra atom coding.
    Elem power(int sign) const {
        if (sign != 0 && sign != 1) throw usage_error("literal sign must be 0 or 1");
        return sign == 0 ? *this : complement();
    }

    static void check_pair(const Elem& a, const Elem& b) {
        if (a.algebra != b.algebra) throw usage_error("elements of different algebras");
    }
};

// A finite Boolean algebra is just its atom count plus an identity. All
// structure lives in how Elems and Subalgebras index those atoms.
class FiniteBA {
public:
    explicit FiniteBA(std::size_t atom_count);

    AlgebraId id() const { return id_; }
    std::size_t atom_count() const { return atom_count_; }

    Elem zero() const { return Elem(id_, AtomSet(atom_count_)); }
    Elem one() const { return Elem(id_, AtomSet::full(atom_count_)); }
    Elem atom(std::size_t i) const {
        if (i >= atom_count_) throw usage_error("atom index out of range");
        return Elem(id_, AtomSet::singleton(atom_count_, i));
    }
    Elem elem(AtomSet s) const {
        if (s.size_bits() != atom_count_) throw usage_error("element width mismatch");
        return Elem(id_, std::move(s));
    }
    Elem elem(const std::vector<std::size_t>& atoms) const;

    void check_owns(const Elem& x) const {
        if (x.algebra != id_) throw usage_error("element of a different algebra");
    }

private:
    AlgebraId id_;
    std::size_t atom_count_;
};

// Free algebra on n generators: 2^n atoms. Atom m is the product of the
// generators signed by the bits of m, so generator i holds the atoms whose
// bit i is clear.
struct FreeAlgebra {
    FiniteBA ba;
    std::vector<Elem> gens;
};

FreeAlgebra make_free(std::size_t n_gens);

// Subalgebra of a fixed ambient algebra, stored as the partition of the
// ambient atoms into blocks. Blocks are numbered by first atom, ascending,
// and each block's atom list is sorted.
class Subalgebra {
public:
    static Subalgebra generated(const FiniteBA& ambient, const std::vector<Elem>& gens);
    static Subalgebra trivial(const FiniteBA& ambient);
    // Finest partition: every atom its own block.
    static Subalgebra discrete(const FiniteBA& ambient);

    AlgebraId algebra() const { return algebra_; }
    std::size_t atom_count() const { return atom_block_.size(); }
    std::size_t block_count() const { return block_offset_.size() - 1; }

    std::uint32_t block_of(std::size_t atom) const { return atom_block_[atom]; }
    std::size_t block_size(std::size_t b) const {
        return block_offset_[b + 1] - block_offset_[b];
    }
    const std::uint32_t* block_begin(std::size_t b) const {
        return block_atoms_.data() + block_offset_[b];
    }
    const std::uint32_t* block_end(std::size_t b) const {
        return block_atoms_.data() + block_offset_[b + 1];
    }
    AtomSet block_set(std::size_t b) const;

    // Largest member below x: the union of blocks contained in x.
    Elem lpr(const Elem& x) const;
    // Smallest member above x: the union of blocks meeting x.
    Elem upr(const Elem& x) const;
    bool contains(const Elem& x) const;

    // Partition refinement by further elements; result is the subalgebra
    // generated by this one together with extra.
    Subalgebra extended(const FiniteBA& ambient, const std::vector<Elem>& extra) const;

    bool operator==(const Subalgebra& o) const {
        return algebra_ == o.algebra_ && atom_block_ == o.atom_block_;
    }
    bool operator!=(const Subalgebra& o) const { return !(*this == o); }

private:
    friend Subalgebra from_atom_blocks(AlgebraId, std::vector<std::uint32_t>);

    AlgebraId algebra_ = 0;
    std::vector<std::uint32_t> atom_block_;
    std::vector<std::uint32_t> block_offset_;
    std::vector<std::uint32_t> block_atoms_;
};

// Build a Subalgebra from an atom -> block-label map. Labels are renumbered
// canonically (by first atom).
Subalgebra from_atom_blocks(AlgebraId algebra, std::vector<std::uint32_t> atom_block);

// True iff every block of coarse is a union of blocks of fine, that is,
// coarse is a subalgebra of fine.
bool subalgebra_leq(const Subalgebra& coarse, const Subalgebra& fine);

// Largest subalgebra contained in both: atoms end up together whenever they
// share a block of a or a block of b (finest common coarsening).
Subalgebra subalgebra_meet(const Subalgebra& a, const Subalgebra& b);

// ws independent over base: every (block of base, sign vector over ws)
// product is nonzero.
bool is_independent_over(const FiniteBA& ambient, const Subalgebra& base,
                         const std::vector<Elem>& ws);

// Witness that fine is freely generated over coarse: a set W independent
// over coarse with coarse + W generating fine. Exists iff every coarse
// block splits into the same power-of-two number of fine blocks. The
// witness is the canonical one coding each block's fine blocks in ascending
// order, and is empty when the partitions already agree.
std::optional<std::vector<Elem>> free_witness(const FiniteBA& ambient,
                                              const Subalgebra& fine,
                                              const Subalgebra& coarse);

bool is_free_over(const FiniteBA& ambient, const Subalgebra& fine,
                  const Subalgebra& coarse);

// Unital homomorphism between finite algebras, stored as its dual map on
// atoms: fiber[t] is the unique source atom whose image contains target
// atom t. Injectivity is surjectivity of the fiber map.
class Morphism {
public:
    Morphism() = default;
    Morphism(const FiniteBA& source, const FiniteBA& target,
             std::vector<std::uint32_t> fiber);

    static Morphism identity(const FiniteBA& a);

    AlgebraId source() const { return source_; }
    AlgebraId target() const { return target_; }
    std::size_t source_atoms() const { return source_atoms_; }
    std::size_t target_atoms() const { return fiber_.size(); }
    const std::vector<std::uint32_t>& fiber() const { return fiber_; }

    Elem map(const Elem& x) const;
    bool injective() const;
    // Image of the whole source algebra as a subalgebra of the target.
    Subalgebra image() const;
    // Preimage of a target element; exact when the element lies in the
    // image, otherwise the largest source element mapping into it.
    Elem preimage_lower(const Elem& y, const FiniteBA& source_ba) const;

    // g after f.
    static Morphism compose(const Morphism& g, const Morphism& f);

private:
    AlgebraId source_ = 0, target_ = 0;
    std::size_t source_atoms_ = 0;
    std::vector<std::uint32_t> fiber_;
};

struct CoproductResult {
    FiniteBA ba;
    std::vector<Morphism> inject;
};

// Free product. Atoms are tuples of factor atoms, indexed row-major in
// factor order.
CoproductResult coproduct(const std::vector<const FiniteBA*>& factors);
CoproductResult coproduct(const FiniteBA& a, const FiniteBA& b);

struct QuotientResult {
    FiniteBA ba;
    Morphism proj;
};

// Kill the ideal generated by r. Surviving atoms are those outside r,
// renumbered in ascending order. r = 1 has no atomic quotient.
QuotientResult quotient_by_element(const FiniteBA& a, const Elem& r);

struct AdjoinResult {
    FiniteBA ba;
    Morphism embed;
    Elem x;
};

// Extend a by a new element x with below <= x and x * disjoint = 0, freely
// otherwise. Requires below * disjoint = 0. The result is two partial
// copies of a: atoms outside disjoint carry x, atoms outside below carry
// the complement. By construction the lower projection of x onto a is
// exactly below and the upper one is the complement of disjoint.
AdjoinResult adjoin_element(const FiniteBA& a, const Elem& below, const Elem& disjoint);

} // namespace baw
