//! Modular, signed modular and orientation homomorphisms of a graph, and the
//! integral-moduli questions about their image.

use std::collections::{BTreeSet, HashSet};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::json;

use crate::arith::{ExponentVector, SignedRational};
use crate::error::{Error, Result};
use crate::graph::{End, Graph, VertexId};
use crate::lattice::Lattice;
use crate::simplex::{maximize, LpOutcome};

/// Image of the signed modular homomorphism on a cycle basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuliLattice {
    pub generators: Vec<SignedRational>,
    pub primes: Vec<u64>,
}

fn cycle_value(g: &Graph, cycle: &[End]) -> SignedRational {
    cycle.iter().fold(SignedRational::one(), |acc, e| {
        let i = g.index(e).expect("cycle edge");
        let j = g.index(&e.reverse()).expect("cycle edge");
        acc.mul(&SignedRational::from_ratio(j, i))
    })
}

fn from_cycles(g: &Graph, cycles: &[Vec<End>]) -> ModuliLattice {
    ModuliLattice::new(cycles.iter().map(|c| cycle_value(g, c)).collect())
}

/// One generator per fundamental cycle: the product over the cycle of
/// `i(ē)/i(e)`.
pub fn modular_group(g: &Graph) -> ModuliLattice {
    from_cycles(g, &g.fundamental_cycles())
}

/// Same as [`modular_group`] with the spanning tree grown from `root`.
pub fn modular_group_from(g: &Graph, root: &VertexId) -> ModuliLattice {
    from_cycles(g, &g.fundamental_cycles_from(root))
}

impl ModuliLattice {
    pub fn new(generators: Vec<SignedRational>) -> ModuliLattice {
        let primes: BTreeSet<u64> = generators.iter().flat_map(|q| q.magnitude.support()).collect();
        ModuliLattice { generators, primes: primes.into_iter().collect() }
    }

    /// Lattice from unsigned magnitudes only.
    pub fn unsigned(generators: Vec<ExponentVector>) -> ModuliLattice {
        Self::new(generators.into_iter().map(|m| SignedRational { sign: 1, magnitude: m }).collect())
    }

    pub fn magnitudes(&self) -> impl Iterator<Item = &ExponentVector> {
        self.generators.iter().map(|q| &q.magnitude)
    }

    pub fn orientation(&self) -> Vec<i8> {
        self.generators.iter().map(|q| q.sign).collect()
    }

    fn coords(&self) -> Vec<Vec<i64>> {
        self.magnitudes().map(|m| m.coordinates(&self.primes).unwrap()).collect()
    }

    pub fn unsigned_lattice(&self) -> Result<Lattice> {
        Lattice::new(self.primes.len(), &self.coords())
    }

    /// Coordinates: exponents then one sign bit, with `2` in the sign slot
    /// added as a generator so the bit is read modulo 2.
    pub fn signed_lattice(&self) -> Result<Lattice> {
        let d = self.primes.len();
        let mut rows: Vec<Vec<i64>> = self
            .coords()
            .into_iter()
            .zip(&self.generators)
            .map(|(mut c, q)| {
                c.push(if q.sign < 0 { 1 } else { 0 });
                c
            })
            .collect();
        let mut two = vec![0; d + 1];
        two[d] = 2;
        rows.push(two);
        Lattice::new(d + 1, &rows)
    }

    /// Membership of a positive rational in the unsigned image.
    pub fn contains(&self, q: &ExponentVector) -> bool {
        match q.coordinates(&self.primes) {
            Some(c) => self.unsigned_lattice().map(|l| l.contains(&c)).unwrap_or(false),
            None => false,
        }
    }

    pub fn contains_signed(&self, q: &SignedRational) -> bool {
        match q.magnitude.coordinates(&self.primes) {
            Some(mut c) => {
                c.push(if q.sign < 0 { 1 } else { 0 });
                self.signed_lattice().map(|l| l.contains(&c)).unwrap_or(false)
            }
            None => false,
        }
    }

    /// Equal unsigned images.
    pub fn same_unsigned(&self, other: &ModuliLattice) -> bool {
        self.magnitudes().all(|m| other.contains(m)) && other.magnitudes().all(|m| self.contains(m))
    }

    /// Equal signed images.
    pub fn same_signed(&self, other: &ModuliLattice) -> bool {
        self.generators.iter().all(|q| other.contains_signed(q))
            && other.generators.iter().all(|q| self.contains_signed(q))
    }

    pub fn has_nontrivial_integral_modulus(&self) -> bool {
        has_nontrivial_integral_modulus(self)
    }
}

/// Whether the rational span of `vectors` (all of length `dim`) contains a
/// non-zero vector with nonnegative entries.
///
/// Solved as `max Σ_j (λG)_j` over `λ = λ⁺ - λ⁻` with `λG >= 0` and
/// `Σ_j (λG)_j <= 1`; the optimum is positive exactly when such a vector
/// exists.
pub fn span_meets_orthant(dim: usize, vectors: &[Vec<i64>]) -> bool {
    let k = vectors.len();
    if k == 0 || dim == 0 {
        return false;
    }
    let q = |x: i64| BigRational::from_integer(x.into());
    // column j of the span, as a linear form in (λ⁺, λ⁻)
    let form = |j: usize| -> Vec<BigRational> {
        vectors.iter().map(|v| q(v[j])).chain(vectors.iter().map(|v| q(-v[j]))).collect()
    };
    let mut a = Vec::with_capacity(dim + 1);
    let mut b = Vec::with_capacity(dim + 1);
    let mut total = vec![BigRational::zero(); 2 * k];
    for j in 0..dim {
        let f = form(j);
        total.iter_mut().zip(&f).for_each(|(t, x)| *t += x);
        a.push(f.into_iter().map(|x| -x).collect());
        b.push(BigRational::zero());
    }
    a.push(total.clone());
    b.push(BigRational::one());
    match maximize(&a, &b, &total) {
        LpOutcome::Optimal(v) => v.is_positive(),
        LpOutcome::Unbounded => unreachable!("objective is capped by a constraint"),
    }
}

/// True when the unsigned image contains an integer other than 1.
pub fn has_nontrivial_integral_modulus(l: &ModuliLattice) -> bool {
    let coords = l.coords();
    span_meets_orthant(l.primes.len(), &coords)
}

/// Integers in the coset `r · Q`, searching coefficient vectors with entries
/// in `[-bound, bound]` over an echelon basis of `Q`. Every returned value is
/// checked for membership.
pub fn integral_coset(r: &ExponentVector, l: &ModuliLattice, bound: i64) -> Result<BTreeSet<u128>> {
    if has_nontrivial_integral_modulus(l) {
        return Err(Error::IntegralModuli);
    }
    let primes: Vec<u64> =
        l.primes.iter().copied().chain(r.support()).collect::<BTreeSet<_>>().into_iter().collect();
    let lifted: Vec<Vec<i64>> = l.magnitudes().map(|m| m.coordinates(&primes).unwrap()).collect();
    let lattice = Lattice::new(primes.len(), &lifted)?;
    let base: Vec<i128> = r.coordinates(&primes).unwrap().into_iter().map(i128::from).collect();
    let basis = lattice.basis();

    let mut out = BTreeSet::new();
    let mut seen = HashSet::new();
    let span = (2 * bound + 1) as usize;
    let total = span.checked_pow(basis.len() as u32).ok_or(Error::Overflow)?;
    for code in 0..total {
        let mut rest = code;
        let mut v = base.clone();
        for row in basis {
            let c = (rest % span) as i128 - bound as i128;
            rest /= span;
            for (x, y) in v.iter_mut().zip(row) {
                *x += c * y;
            }
        }
        if v.iter().any(|&x| x < 0) || !seen.insert(v.clone()) {
            continue;
        }
        let coords: Vec<i64> = v
            .iter()
            .map(|&x| i64::try_from(x))
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Overflow)?;
        let value = ExponentVector::from_coordinates(&primes, &coords);
        debug_assert!(l.contains(&value.div(r)));
        out.insert(value.to_u128().ok_or(Error::Overflow)?);
    }
    Ok(out)
}

/// Summary record used by the command-line `invariants` output.
pub fn invariants_json(g: &Graph) -> serde_json::Value {
    let l = modular_group(g);
    json!({
        "betti": g.betti(),
        "primes": l.primes,
        "unsigned_generators": l.magnitudes().map(|m| m.to_string()).collect::<Vec<_>>(),
        "signed_generators": l.generators.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        "orientation": l.orientation(),
        "integral_moduli": has_nontrivial_integral_modulus(&l),
    })
}
