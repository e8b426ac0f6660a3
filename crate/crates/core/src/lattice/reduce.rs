use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::fma;
use super::{IntMatrix, LatticeError};

/// `a / b` rounded to the nearest integer (ties away from zero).
fn round_div(a: i64, b: i64) -> i64 {
    let (a, b) = (a as i128, b as i128);
    let q = (2 * a.abs() + b.abs()) / (2 * b.abs());
    (if (a < 0) != (b < 0) { -q } else { q }) as i64
}

fn cost(g: &IntMatrix) -> i128 {
    (0..g.rows()).flat_map(|i| g.row(i).iter().map(|x| (*x as i128).abs())).sum()
}

/// Change in `Σ|G_kl|` if basis vector `j` is replaced by `e_j + t·e_i`.
fn move_delta(g: &IntMatrix, i: usize, j: usize, t: i64) -> Option<i128> {
    let n = g.rows();
    let t = t as i128;
    let mut delta = 0i128;
    for k in 0..n {
        if k == j {
            continue;
        }
        let old = g[(j, k)] as i128;
        let new = old + t * g[(i, k)] as i128;
        delta += 2 * (new.abs() - old.abs());
    }
    let old = g[(j, j)] as i128;
    let new = old + 2 * t * g[(i, j)] as i128 + t * t * g[(i, i)] as i128;
    delta += new.abs() - old.abs();
    i64::try_from(new).ok()?;
    Some(delta)
}

/// Applies `e_j ← e_j + t·e_i` to a Gram matrix in place.
fn apply_move(g: &mut IntMatrix, i: usize, j: usize, t: i64) -> Result<(), LatticeError> {
    let n = g.rows();
    let gii = g[(i, i)];
    let gij = g[(i, j)];
    let gjj = g[(j, j)];
    let t2 = t.checked_mul(t).ok_or(LatticeError::Overflow)?;
    let new_jj = fma(fma(gjj, 2 * t, gij)?, t2, gii)?;
    for k in 0..n {
        if k == j {
            continue;
        }
        let v = fma(g[(j, k)], t, g[(i, k)])?;
        g[(j, k)] = v;
        g[(k, j)] = v;
    }
    g[(j, j)] = new_jj;
    Ok(())
}

/// Greedy unimodular reduction of an arbitrary (possibly indefinite) Gram
/// matrix: repeatedly applies the elementary move `e_j ← e_j + t·e_i` that
/// most decreases `Σ|G_kl|`, until no move improves. Returns `T` with the
/// reduced Gram equal to `Tᵀ·G·T`.
pub(crate) fn reduce_indefinite(gram: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    let n = gram.rows();
    let mut g = gram.clone();
    let mut t_mat = IntMatrix::identity(n);
    let mut current = cost(&g);
    loop {
        let mut best: Option<(i128, usize, usize, i64)> = None;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut steps = vec![-1, 1];
                if g[(i, i)] != 0 {
                    let q = -round_div(g[(i, j)], g[(i, i)]);
                    if q.abs() > 1 {
                        steps.push(q);
                    }
                }
                for t in steps {
                    if let Some(d) = move_delta(&g, i, j, t) {
                        if d < 0 && best.is_none_or(|(bd, ..)| d < bd) {
                            best = Some((d, i, j, t));
                        }
                    }
                }
            }
        }
        let Some((d, i, j, t)) = best else { break };
        apply_move(&mut g, i, j, t)?;
        t_mat.add_column_multiple(j, i, t)?;
        current += d;
        debug_assert_eq!(current, cost(&g));
    }
    Ok(t_mat)
}

/// Reduction of a nondegenerate indefinite Gram matrix: LLL on the positive
/// definite majorant `Pᵀ·|D|·P` of a rational diagonalization `G = Pᵀ·D·P`,
/// followed by [`reduce_indefinite`]. Returns `T` with the reduced Gram
/// `Tᵀ·G·T`.
pub(crate) fn reduce_by_majorant(gram: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    let m = majorant(gram)?;
    let t1 = lll_reduce_big(&m)?;
    let g1 = t1.congruence(gram)?;
    let t2 = reduce_indefinite(&g1)?;
    t1.mul(&t2)
}

/// [`majorant`] divided by the gcd of its entries, if that fits in `i64`.
pub(crate) fn majorant_matrix(gram: &IntMatrix) -> Option<IntMatrix> {
    let m = majorant(gram).ok()?;
    let g = m.iter().flatten().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    let rows = m.iter().map(|row| row.iter().map(|x| (x / &g).to_i64()).collect::<Option<Vec<_>>>()).collect::<Option<Vec<_>>>()?;
    IntMatrix::from_rows(rows).ok()
}

/// An integer multiple of `Pᵀ·|D|·P` where `G = Pᵀ·D·P` over `Q` with `D`
/// diagonal.
fn majorant(gram: &IntMatrix) -> Result<Vec<Vec<BigInt>>, LatticeError> {
    let n = gram.rows();
    let q = |x: i64| BigRational::from_integer(x.into());
    let mut a: Vec<Vec<BigRational>> = (0..n).map(|i| gram.row(i).iter().map(|&x| q(x)).collect()).collect();
    // Rows of `p` track the inverse of the accumulated basis change.
    let mut p: Vec<Vec<BigRational>> = (0..n).map(|i| (0..n).map(|j| q((i == j) as i64)).collect()).collect();
    for i in 0..n {
        if a[i][i].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(i, j);
                for row in a.iter_mut() {
                    row.swap(i, j);
                }
                p.swap(i, j);
            } else if let Some(j) = (i + 1..n).find(|&j| !a[i][j].is_zero()) {
                // e_i ← e_i + e_j
                for k in 0..n {
                    let v = &a[i][k] + &a[j][k];
                    a[i][k] = v;
                }
                for k in 0..n {
                    let v = &a[k][i] + &a[k][j];
                    a[k][i] = v;
                }
                for k in 0..n {
                    let v = &p[j][k] - &p[i][k];
                    p[j][k] = v;
                }
            } else {
                return Err(LatticeError::Unverified("degenerate Gram matrix has no majorant".into()));
            }
        }
        for j in i + 1..n {
            if a[i][j].is_zero() {
                continue;
            }
            // e_j ← e_j − c·e_i
            let c = &a[i][j] / &a[i][i];
            for k in 0..n {
                let v = &a[j][k] - &c * &a[i][k];
                a[j][k] = v;
            }
            for k in 0..n {
                let v = &a[k][j] - &c * &a[k][i];
                a[k][j] = v;
            }
            for k in 0..n {
                let v = &p[i][k] + &c * &p[j][k];
                p[i][k] = v;
            }
        }
    }
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for (r, pr) in p.iter().enumerate() {
        let w = a[r][r].abs();
        for i in 0..n {
            if pr[i].is_zero() {
                continue;
            }
            let wi = &w * &pr[i];
            for j in 0..n {
                let v = &m[i][j] + &wi * &pr[j];
                m[i][j] = v;
            }
        }
    }
    let den = m.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    Ok(m.iter().map(|row| row.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect()).collect())
}

/// Integral LLL reduction (δ = 3/4) of a positive definite Gram matrix,
/// tracking the Gram–Schmidt data as integers `dᵢ` (leading principal
/// minors) and `λᵢⱼ = dⱼ·μᵢⱼ`. Returns `T` with the reduced Gram `Tᵀ·G·T`.
pub(crate) fn lll_reduce(gram: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    let n = gram.rows();
    let big: Vec<Vec<BigInt>> = (0..n).map(|i| gram.row(i).iter().map(|&x| BigInt::from(x)).collect()).collect();
    lll_reduce_big(&big)
}

fn lll_reduce_big(gram: &[Vec<BigInt>]) -> Result<IntMatrix, LatticeError> {
    let n = gram.len();
    let mut t = IntMatrix::identity(n);
    if n < 2 {
        return Ok(t);
    }
    // 1-based working copies; index 0 of `d` is d₀ = 1.
    let mut g: Vec<Vec<BigInt>> = (0..=n)
        .map(|i| (0..=n).map(|j| if i == 0 || j == 0 { BigInt::zero() } else { gram[i - 1][j - 1].clone() }).collect())
        .collect();
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    let mut d = vec![BigInt::zero(); n + 1];
    d[0] = BigInt::one();
    d[1] = g[1][1].clone();
    if !d[1].is_positive() {
        return Err(LatticeError::Unverified("LLL needs a positive definite Gram matrix".into()));
    }

    let (mut k, mut kmax) = (2usize, 1usize);
    let mut guard = 0u32;
    while k <= n {
        guard += 1;
        if guard > 1_000_000 {
            return Err(LatticeError::Unverified("LLL did not terminate".into()));
        }
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = g[k][j].clone();
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if !u.is_positive() {
                        return Err(LatticeError::Unverified("LLL needs a positive definite Gram matrix".into()));
                    }
                    d[k] = u;
                }
            }
        }
        size_reduce(k, k - 1, &mut g, &mut lam, &d, &mut t)?;
        let l = &lam[k][k - 1];
        if BigInt::from(4) * &d[k] * &d[k - 2] < BigInt::from(3) * &d[k - 1] * &d[k - 1] - BigInt::from(4) * l * l {
            // Swap bᵏ and bᵏ⁻¹.
            t.swap_columns(k - 1, k - 2);
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            for j in 1..k - 1 {
                let (a, b) = (lam[k][j].clone(), lam[k - 1][j].clone());
                lam[k][j] = b;
                lam[k - 1][j] = a;
            }
            let l = lam[k][k - 1].clone();
            let b = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
            for i in k + 1..=kmax {
                let tmp = lam[i][k].clone();
                lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &tmp) / &d[k - 1];
                lam[i][k - 1] = (&b * &tmp + &l * &lam[i][k]) / &d[k];
            }
            d[k - 1] = b;
            k = (k - 1).max(2);
        } else {
            for l in (1..k - 1).rev() {
                size_reduce(k, l, &mut g, &mut lam, &d, &mut t)?;
            }
            k += 1;
        }
    }
    Ok(t)
}

/// `bₖ ← bₖ − q·bₗ` with `q` the nearest integer to `μₖₗ`.
fn size_reduce(
    k: usize,
    l: usize,
    g: &mut [Vec<BigInt>],
    lam: &mut [Vec<BigInt>],
    d: &[BigInt],
    t: &mut IntMatrix,
) -> Result<(), LatticeError> {
    if BigInt::from(2) * lam[k][l].abs() <= d[l] {
        return Ok(());
    }
    let two = BigInt::from(2);
    let q = (&two * &lam[k][l] + &d[l]).div_floor(&(&two * &d[l]));
    let qi = q.to_i64().ok_or(LatticeError::Overflow)?;
    t.add_column_multiple(k - 1, l - 1, -qi)?;
    let n = g.len() - 1;
    for j in 1..=n {
        let v = &g[k][j] - &q * &g[l][j];
        g[k][j] = v;
    }
    for i in 1..=n {
        let v = &g[i][k] - &q * &g[i][l];
        g[i][k] = v;
    }
    let v = &lam[k][l] - &q * &d[l];
    lam[k][l] = v;
    for i in 1..l {
        let v = &lam[k][i] - &q * &lam[l][i];
        lam[k][i] = v;
    }
    Ok(())
}
