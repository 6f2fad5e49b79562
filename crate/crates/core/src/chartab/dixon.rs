//! Dixon's method: the irreducible characters as common eigenvectors of the
//! class-multiplication matrices over a prime field `F_q` with
//! `q ≡ 1 (mod exp G)`, lifted back to `Q(ζ_exp)`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::{is_prime, mod_inv, mod_pow, mul_mod, primitive_root};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::Group;

/// The `count` smallest primes `q ≡ 1 (mod exp G)` with `q > 2√|G|`.
pub fn dixon_primes(g: &Group, count: usize) -> Vec<u64> {
    let e = g.exponent();
    let n = g.order() as u64;
    let mut out = Vec::with_capacity(count);
    let mut q = e + 1;
    while out.len() < count {
        // q > 2√n  ⇔  q² > 4n
        if (q as u128 * q as u128) > 4 * n as u128 && is_prime(q) {
            out.push(q);
        }
        q += e;
    }
    out
}

/// Class-multiplication coefficients `a[j][i][l]`: the number of pairs
/// `(x, y) ∈ C_j × C_i` with `xy = z_l` for the fixed representative `z_l`.
fn class_coefficients(g: &Group) -> Vec<Vec<Vec<u64>>> {
    let k = g.class_count();
    let mut a = vec![vec![vec![0u64; k]; k]; k];
    for (l, cl) in g.classes().iter().enumerate() {
        let z = cl.representative;
        for x in 0..g.order() as u32 {
            let y = g.mul(g.inv(x), z);
            a[g.class_of(x)][g.class_of(y)][l] += 1;
        }
    }
    a
}

/// Row-reduced basis of a subspace of `F_q^k`.
#[derive(Clone, Debug)]
struct Subspace {
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

fn rref(mut rows: Vec<Vec<u64>>, q: u64) -> Subspace {
    let k = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(r, p);
        let inv = mod_inv(rows[r][col], q).expect("nonzero mod prime");
        for v in rows[r].iter_mut() {
            *v = mul_mod(*v, inv, q);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let f = rows[i][col];
                for c in 0..k {
                    let sub = mul_mod(f, rows[r][c], q);
                    rows[i][c] = (rows[i][c] + q - sub) % q;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    Subspace { rows, pivots }
}

/// Basis of the nullspace of a square matrix over `F_q`.
fn nullspace(m: &[Vec<u64>], q: u64) -> Vec<Vec<u64>> {
    let d = m.len();
    let red = rref(m.to_vec(), q);
    let free: Vec<usize> = (0..d).filter(|c| !red.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; d];
            v[f] = 1;
            for (row, &p) in red.rows.iter().zip(&red.pivots) {
                v[p] = (q - row[f]) % q;
            }
            v
        })
        .collect()
}

/// Splits `space` into eigenspaces of `mat` (which leaves it invariant).
fn split(space: &Subspace, mat: &[Vec<u64>], q: u64) -> Vec<Subspace> {
    let d = space.rows.len();
    let k = mat.len();
    // image of each basis vector, in basis coordinates (read off at pivots)
    let mut restricted = vec![vec![0u64; d]; d];
    for (t, b) in space.rows.iter().enumerate() {
        let image: Vec<u64> =
            (0..k).map(|i| (0..k).fold(0, |acc, l| (acc + mul_mod(mat[i][l], b[l], q)) % q)).collect();
        for (s, &p) in space.pivots.iter().enumerate() {
            restricted[s][t] = image[p];
        }
    }
    let mut pieces = Vec::new();
    for lambda in 0..q {
        let shifted: Vec<Vec<u64>> = restricted
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter().enumerate().map(|(j, &v)| if i == j { (v + q - lambda) % q } else { v }).collect()
            })
            .collect();
        let null = nullspace(&shifted, q);
        if null.is_empty() {
            continue;
        }
        if null.len() == d {
            return vec![space.clone()];
        }
        let vectors = null
            .iter()
            .map(|u| {
                (0..k)
                    .map(|c| u.iter().zip(&space.rows).fold(0, |acc, (&ut, b)| (acc + mul_mod(ut, b[c], q)) % q))
                    .collect()
            })
            .collect();
        pieces.push(rref(vectors, q));
    }
    pieces
}

/// Computes the irreducible characters (unsorted) using the prime `q`.
pub fn dixon_table(g: &Group, q: u64) -> Result<Vec<Vec<Cyclotomic>>> {
    let k = g.class_count();
    let n = g.order() as u64;
    let e = g.exponent();
    if (q - 1) % e != 0 || !is_prime(q) || q as u128 * q as u128 <= 4 * n as u128 {
        return Err(Error::Dixon(format!("{q} is not a valid Dixon prime for |G| = {n}, exp = {e}")));
    }
    let coeffs = class_coefficients(g);
    let mats: Vec<Vec<Vec<u64>>> =
        coeffs.iter().map(|mj| mj.iter().map(|row| row.iter().map(|&c| c % q).collect()).collect()).collect();

    let identity: Vec<Vec<u64>> = (0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect();
    let mut done: Vec<Vec<u64>> = Vec::new();
    let mut pending = vec![rref(identity, q)];
    while let Some(space) = pending.pop() {
        if space.rows.len() == 1 {
            done.push(space.rows[0].clone());
            continue;
        }
        let mut progressed = false;
        for mat in mats.iter().skip(1) {
            let pieces = split(&space, mat, q);
            if pieces.len() > 1 {
                pending.extend(pieces);
                progressed = true;
                break;
            }
        }
        if !progressed {
            return Err(Error::Dixon(format!("class matrices do not separate characters mod {q}")));
        }
    }
    if done.len() != k {
        return Err(Error::Dixon(format!("found {} eigenvectors for {k} classes", done.len())));
    }

    let sizes: Vec<u64> = g.classes().iter().map(|c| c.size() as u64).collect();
    let inverse_class: Vec<usize> = g.classes().iter().map(|c| g.class_of(g.inv(c.representative))).collect();
    let root = mod_pow(primitive_root(q), (q - 1) / e, q);
    let inv_e = mod_inv(e % q, q).expect("q does not divide exp G");
    let powers: Vec<Vec<usize>> = (0..k).map(|c| (0..e).map(|s| g.class_power(c, s)).collect()).collect();

    let mut rows = Vec::with_capacity(k);
    for w in done {
        let w0 = mod_inv(w[0], q).ok_or_else(|| Error::Dixon("eigenvector vanishes at 1".into()))?;
        let omega: Vec<u64> = w.iter().map(|&x| mul_mod(x, w0, q)).collect();
        let mut s = 0u64;
        for i in 0..k {
            let term = mul_mod(mul_mod(omega[i], omega[inverse_class[i]], q), mod_inv(sizes[i] % q, q).unwrap(), q);
            s = (s + term) % q;
        }
        let d2 = mul_mod(n % q, mod_inv(s, q).ok_or_else(|| Error::Dixon("degenerate norm".into()))?, q);
        let degree = (1..=n)
            .take_while(|d| d * d <= n)
            .find(|d| d * d % q == d2)
            .ok_or_else(|| Error::Dixon("no admissible degree".into()))?;
        let values_mod: Vec<u64> =
            (0..k).map(|i| mul_mod(mul_mod(omega[i], degree, q), mod_inv(sizes[i] % q, q).unwrap(), q)).collect();
        let mut row = Vec::with_capacity(k);
        for c in 0..k {
            let mut terms = Vec::new();
            let mut total = 0u64;
            for t in 0..e {
                let mut acc = 0u64;
                for s in 0..e {
                    let zinv = mod_pow(root, (e - (t * s) % e) % e, q);
                    acc = (acc + mul_mod(values_mod[powers[c][s as usize]], zinv, q)) % q;
                }
                let m = mul_mod(acc, inv_e, q);
                if m > degree {
                    return Err(Error::Dixon(format!("eigenvalue multiplicity {m} exceeds degree {degree}")));
                }
                total += m;
                if m > 0 {
                    terms.push((t as i64, BigRational::from_integer(BigInt::from(m))));
                }
            }
            if total != degree {
                return Err(Error::Dixon("eigenvalue multiplicities do not sum to the degree".into()));
            }
            row.push(Cyclotomic::from_exponent_sums(e as u32, terms));
        }
        rows.push(row);
    }
    Ok(rows)
}
