//! Exact dense-tableau simplex for `max c·x` subject to `A x <= b`, `x >= 0`
//! with `b >= 0`, so the origin is a starting vertex. Bland's rule.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(BigRational),
    Unbounded,
}

pub fn maximize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    assert!(b.iter().all(|x| !x.is_negative()), "right-hand side must be nonnegative");
    // columns: n originals, m slacks, then rhs
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row = vec![BigRational::zero(); width];
            row[..n].clone_from_slice(&a[i]);
            row[n + i] = BigRational::from_integer(1.into());
            row[width - 1] = b[i].clone();
            row
        })
        .collect();
    // reduced costs: z - c
    let mut z: Vec<BigRational> = vec![BigRational::zero(); width];
    for j in 0..n {
        z[j] = -c[j].clone();
    }
    let mut basic: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(enter) = (0..n + m).find(|&j| z[j].is_negative()) else {
            return LpOutcome::Optimal(z[width - 1].clone());
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((k, r)) => ratio < *r || (ratio == *r && basic[i] < basic[*k]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else { return LpOutcome::Unbounded };

        let piv = t[r][enter].clone();
        t[r].iter_mut().for_each(|x| *x = &*x / &piv);
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let k = row[enter].clone();
                row.iter_mut().zip(&pivot_row).for_each(|(x, p)| *x = &*x - &k * p);
            }
        }
        if !z[enter].is_zero() {
            let k = z[enter].clone();
            z.iter_mut().zip(&pivot_row).for_each(|(x, p)| *x = &*x - &k * p);
        }
        basic[r] = enter;
    }
}
