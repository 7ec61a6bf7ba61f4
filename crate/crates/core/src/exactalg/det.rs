//! Determinant engines: fraction-free over Z, Gaussian over F_p, and a
//! division-free expansion over any commutative ring.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::field::{Fp, PrimeField};
use super::poly::MultiPoly;
use super::Scalar;
use crate::error::{Error, Result};

pub const MAX_EXPANSION_DIM: usize = 8;

fn check_square<T>(m: &[Vec<T>]) -> Result<usize> {
    let n = m.len();
    for row in m {
        if row.len() != n {
            return Err(Error::NotSquare {
                rows: n,
                cols: row.len(),
            });
        }
    }
    Ok(n)
}

/// Bareiss elimination. Every division is exact; this is asserted.
pub fn det_bareiss_int(m: &[Vec<BigInt>]) -> Result<BigInt> {
    let n = check_square(m)?;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign_flip = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                let (q, r) = num.div_rem(&prev);
                assert!(r.is_zero(), "inexact Bareiss division");
                a[i][j] = q;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if sign_flip { -d } else { d })
}

/// Gaussian elimination over `field`, pivoting on the first nonzero entry.
pub fn det_gauss_field(m: &[Vec<Fp>], field: PrimeField) -> Result<Fp> {
    let n = check_square(m)?;
    let mut a: Vec<Vec<Fp>> = m.to_vec();
    let mut det = field.one();
    for k in 0..n {
        let Some(r) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Ok(field.zero());
        };
        if r != k {
            a.swap(k, r);
            det = det.neg();
        }
        let pivot = a[k][k];
        det = det.mul(pivot);
        let inv = pivot.inverse().expect("pivot is nonzero");
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = a[i][k].mul(inv);
            for j in k..n {
                let t = factor.mul(a[k][j]);
                a[i][j] = a[i][j].sub(t);
            }
        }
    }
    Ok(det)
}

/// Cofactor expansion with memoized minors, O(2^n n) ring operations.
///
/// `one` supplies the unit for the empty matrix.
pub fn det_expansion<S: Scalar>(m: &[Vec<S>], one: &S) -> Result<S> {
    let n = check_square(m)?;
    if n > MAX_EXPANSION_DIM {
        return Err(Error::Guard {
            op: "det_expansion",
            got: n,
            range: "0..=8",
        });
    }
    // minor[mask] = det of rows 0..popcount(mask) restricted to the columns in mask
    let mut minor: Vec<Option<S>> = vec![None; 1 << n];
    minor[0] = Some(one.one_like());
    for mask in 1usize..(1 << n) {
        let row = mask.count_ones() as usize - 1;
        let mut acc = one.zero_like();
        for (pos, c) in (0..n).filter(|&c| mask & (1 << c) != 0).enumerate() {
            let entry = &m[row][c];
            if entry.vanishes() {
                continue;
            }
            let sub = minor[mask & !(1 << c)].as_ref().expect("smaller masks come first");
            if sub.vanishes() {
                continue;
            }
            let t = entry.times(sub);
            acc = if (row + pos) % 2 == 0 { acc.plus(&t) } else { acc.minus(&t) };
        }
        minor[mask] = Some(acc);
    }
    Ok(minor[(1 << n) - 1].take().expect("full mask computed"))
}

/// Symbolic determinant of a polynomial matrix, dimension at most 8.
pub fn det_expansion_poly(m: &[Vec<MultiPoly>]) -> Result<MultiPoly> {
    det_expansion(m, &MultiPoly::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::VarId;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    // Leibniz over all permutations, the textbook oracle
    fn leibniz(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = BigInt::zero();
        loop {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| perm[i] > perm[j])
                .count();
            let mut t = BigInt::one();
            for i in 0..n {
                t *= &m[i][perm[i]];
            }
            if inversions % 2 == 1 {
                t = -t;
            }
            total += t;
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        total
    }

    #[test]
    fn small_integer_determinants() {
        assert_eq!(det_bareiss_int(&ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap(), BigInt::from(1));
        assert_eq!(det_bareiss_int(&ints(&[&[0, 1], &[1, 0]])).unwrap(), BigInt::from(-1));
        assert_eq!(det_bareiss_int(&ints(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]])).unwrap(), BigInt::from(4));
        assert_eq!(det_bareiss_int(&ints(&[&[0, 0], &[3, 4]])).unwrap(), BigInt::zero());
        assert_eq!(det_bareiss_int(&[]).unwrap(), BigInt::one());
        assert!(matches!(
            det_bareiss_int(&ints(&[&[1, 2], &[3]])),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn field_determinants() {
        let f = PrimeField::new(101).unwrap();
        let id: Vec<Vec<Fp>> = (0..4)
            .map(|i| (0..4).map(|j| f.from_u64((i == j) as u64)).collect())
            .collect();
        assert_eq!(det_gauss_field(&id, f).unwrap(), f.one());
        let singular = vec![vec![f.from_u64(2), f.from_u64(4)], vec![f.from_u64(1), f.from_u64(2)]];
        assert!(det_gauss_field(&singular, f).unwrap().is_zero());
    }

    #[test]
    fn symbolic_small_cases() {
        let x = MultiPoly::var(0);
        let y = MultiPoly::var(1);
        assert_eq!(det_expansion_poly(&[vec![x.clone()]]).unwrap(), x);
        let m = vec![vec![MultiPoly::zero(), x.clone()], vec![y.clone(), MultiPoly::zero()]];
        assert_eq!(det_expansion_poly(&m).unwrap(), x.mul(&y).neg());
        let big = vec![vec![MultiPoly::zero(); 9]; 9];
        assert!(matches!(det_expansion_poly(&big), Err(Error::Guard { .. })));
    }

    #[test]
    fn expansion_matches_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 0..=6 {
            let m: Vec<Vec<BigInt>> = (0..n)
                .map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-9..=9))).collect())
                .collect();
            let oracle = leibniz(&m);
            assert_eq!(det_expansion(&m, &BigInt::one()).unwrap(), oracle);
            assert_eq!(det_bareiss_int(&m).unwrap(), oracle);
        }
    }

    #[test]
    fn symbolic_matches_field_evaluation() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=5 {
            let m: Vec<Vec<MultiPoly>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let v = rng.gen_range(0..4u32);
                            let e = rng.gen_range(-1..=2);
                            MultiPoly::var_pow(v, e).add(&MultiPoly::constant(rng.gen_range(-3..=3)))
                        })
                        .collect()
                })
                .collect();
            let det = det_expansion_poly(&m).unwrap();
            for _ in 0..10 {
                let vals: Vec<Fp> = (0..4).map(|_| f.random_nonzero(&mut rng)).collect();
                let look = |v: VarId| vals.get(v as usize).copied();
                let evaluated = crate::exactalg::eval_matrix(&m, f, look).unwrap();
                assert_eq!(det.eval(f, look).unwrap(), det_gauss_field(&evaluated, f).unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn bareiss_matches_field(n in 1usize..=8, seed in any::<u64>()) {
            let f = PrimeField::default();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m: Vec<Vec<BigInt>> = (0..n)
                .map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000))).collect())
                .collect();
            let reduced: Vec<Vec<Fp>> = m.iter().map(|r| r.iter().map(|v| f.from_bigint(v)).collect()).collect();
            let exact = det_bareiss_int(&m).unwrap();
            prop_assert_eq!(f.from_bigint(&exact), det_gauss_field(&reduced, f).unwrap());
        }
    }
}
