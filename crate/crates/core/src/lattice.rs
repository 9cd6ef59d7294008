//! Integer lattices in row echelon (Hermite) form.

use crate::error::{Error, Result};

/// The Z-span of a set of integer vectors, kept as an echelon basis with
/// positive pivots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<i128>>,
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn combine(a: &[i128], ka: i128, b: &[i128], kb: i128) -> Result<Vec<i128>> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            x.checked_mul(ka)
                .zip(y.checked_mul(kb))
                .and_then(|(p, q)| p.checked_add(q))
                .ok_or(Error::Overflow)
        })
        .collect()
}

impl Lattice {
    pub fn new(dim: usize, generators: &[Vec<i64>]) -> Result<Lattice> {
        let mut rows: Vec<Vec<i128>> = generators
            .iter()
            .map(|g| {
                assert_eq!(g.len(), dim, "generator has wrong dimension");
                g.iter().map(|&x| x as i128).collect()
            })
            .collect();
        let mut basis = Vec::new();
        for col in 0..dim {
            let mut pivot: Option<Vec<i128>> = None;
            let mut rest = Vec::new();
            for row in rows {
                if row[col] == 0 {
                    rest.push(row);
                    continue;
                }
                match pivot.take() {
                    None => pivot = Some(row),
                    Some(p) => {
                        let (g, x, y) = ext_gcd(p[col], row[col]);
                        let new_p = combine(&p, x, &row, y)?;
                        let other = combine(&p, row[col] / g, &row, -(p[col] / g))?;
                        debug_assert_eq!(other[col], 0);
                        if other.iter().any(|&v| v != 0) {
                            rest.push(other);
                        }
                        pivot = Some(new_p);
                    }
                }
            }
            if let Some(mut p) = pivot {
                if p[col] < 0 {
                    p.iter_mut().for_each(|v| *v = -*v);
                }
                basis.push(p);
            }
            rows = rest;
        }
        // reduce entries above each pivot to keep numbers small
        for k in 0..basis.len() {
            let col = basis[k].iter().position(|&v| v != 0).unwrap();
            for j in 0..k {
                let q = basis[j][col].div_euclid(basis[k][col]);
                if q != 0 {
                    basis[j] = combine(&basis[j], 1, &basis[k], -q)?;
                }
            }
        }
        Ok(Lattice { dim, basis })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i128>] {
        &self.basis
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut t: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for row in &self.basis {
            let col = row.iter().position(|&x| x != 0).unwrap();
            if t[col] % row[col] != 0 {
                return false;
            }
            let q = t[col] / row[col];
            match combine(&t, 1, row, -q) {
                Ok(next) => t = next,
                Err(_) => return false,
            }
        }
        t.iter().all(|&x| x == 0)
    }

    /// Integer coefficients `c` with `c · basis = v`, if `v` lies in the lattice.
    pub fn solve(&self, v: &[i64]) -> Option<Vec<i128>> {
        let mut t: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        let mut coeffs = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let col = row.iter().position(|&x| x != 0).unwrap();
            if t[col] % row[col] != 0 {
                return None;
            }
            let q = t[col] / row[col];
            t = combine(&t, 1, row, -q).ok()?;
            coeffs.push(q);
        }
        t.iter().all(|&x| x == 0).then_some(coeffs)
    }

    /// Mutual containment of bases.
    pub fn same_as(&self, other: &Lattice) -> bool {
        let fits = |a: &Lattice, b: &Lattice| {
            a.basis.iter().all(|r| {
                let r: Option<Vec<i64>> = r.iter().map(|&x| i64::try_from(x).ok()).collect();
                r.is_some_and(|r| b.contains(&r))
            })
        };
        self.dim == other.dim && fits(self, other) && fits(other, self)
    }
}
