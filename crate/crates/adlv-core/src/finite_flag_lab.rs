//! Full flags in `F_q^n`, the Frobenius, relative position, and points of
//! classical Deligne-Lusztig varieties over small finite fields.

use rayon::prelude::*;

use crate::error::{Error, Result};

const MAX_ORDER: usize = 1 << 16;
const MAX_CELL: f64 = 2.0e8;

/// `F_{p^m}`. Elements are integers `sum c_i p^i` encoding coefficient vectors
/// with respect to the basis `1, x, ..., x^{m-1}`.
#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn poly_mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let m = f.len() - 1;
    let mut prod = vec![0u32; 2 * m];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for d in (m..prod.len()).rev() {
        let c = prod[d];
        if c != 0 {
            for k in 0..m {
                prod[d - m + k] = (prod[d - m + k] + (p - c) * f[k]) % p;
            }
            prod[d] = 0;
        }
    }
    prod.truncate(m);
    prod
}

fn poly_rem_is_zero(a: &[u32], b: &[u32], p: u32) -> bool {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv_lead = (1..p).find(|&x| x * b[db] % p == 1).unwrap();
    for d in (db..r.len()).rev() {
        let c = r[d] * inv_lead % p;
        if c != 0 {
            for k in 0..=db {
                r[d - db + k] = (r[d - db + k] + (p - c) * b[k] % p) % p;
            }
        }
    }
    r[..db].iter().all(|&c| c == 0)
}

fn digits(mut x: u32, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    for d in 1..=m / 2 {
        for low in 0..p.pow(d as u32) {
            let mut g = digits(low, p, d as u32);
            g.push(1);
            if poly_rem_is_zero(f, &g, p) {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    pub fn new(p: u32, m: u32) -> Result<FiniteField> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidArgument("extension degree must be positive".into()));
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= MAX_ORDER as u64);
        let q = q.ok_or_else(|| Error::Guard(format!("field of order {p}^{m} is too large")))? as u32;
        let modulus = (0..q)
            .map(|low| {
                let mut f = digits(low, p, m);
                f.push(1);
                f
            })
            .find(|f| m == 1 || is_irreducible(f, p))
            .unwrap();
        let mut field = FiniteField {
            p,
            m,
            q,
            modulus,
            exp: Vec::new(),
            log: vec![0; q as usize],
        };
        for gen in 1..q {
            let gd = digits(gen, p, m);
            let mut cur = vec![0u32; m as usize];
            cur[0] = 1;
            let mut exp = Vec::with_capacity(q as usize - 1);
            loop {
                exp.push(field.from_coeffs(&cur));
                cur = poly_mulmod(&cur, &gd, &field.modulus, p);
                if field.from_coeffs(&cur) == 1 {
                    break;
                }
            }
            if exp.len() == q as usize - 1 {
                for (i, &e) in exp.iter().enumerate() {
                    field.log[e as usize] = i as u32;
                }
                field.exp = exp;
                break;
            }
        }
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn to_coeffs(&self, x: u32) -> Vec<u32> {
        digits(x, self.p, self.m)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> u32 {
        c.iter().rev().fold(0, |acc, &d| acc * self.p + d % self.p)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
        self.exp[e as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.exp[((self.q - 1 - self.log[a as usize]) % (self.q - 1)) as usize])
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let e = (self.log[a as usize] as u64 * k) % (self.q as u64 - 1);
        self.exp[e as usize]
    }

    /// `x -> x^p`.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p as u64)
    }

    pub fn is_in_prime_field(&self, a: u32) -> bool {
        self.frobenius(a) == a
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    /// Reduced row echelon form; returns the nonzero rows.
    pub fn rref(&self, rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let mut a: Vec<Vec<u32>> = rows.to_vec();
        let ncols = a.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for col in 0..ncols {
            let Some(piv) = (rank..a.len()).find(|&i| a[i][col] != 0) else {
                continue;
            };
            a.swap(rank, piv);
            let inv = self.inv(a[rank][col]).unwrap();
            for x in a[rank].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for i in 0..a.len() {
                if i != rank && a[i][col] != 0 {
                    let c = a[i][col];
                    for j in 0..ncols {
                        let t = self.mul(c, a[rank][j]);
                        a[i][j] = self.sub(a[i][j], t);
                    }
                }
            }
            rank += 1;
        }
        a.truncate(rank);
        a
    }

    pub fn rank(&self, rows: &[Vec<u32>]) -> usize {
        self.rref(rows).len()
    }
}

/// A full flag `F_1 < ... < F_{n-1}` in `F_q^n`; `spaces[i]` is the reduced
/// echelon basis of `F_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Flag {
    n: usize,
    spaces: Vec<Vec<Vec<u32>>>,
}

impl Flag {
    /// `F_i = span(v_1, ..., v_i)`.
    pub fn from_vectors(field: &FiniteField, vectors: &[Vec<u32>]) -> Result<Flag> {
        let n = vectors.first().map_or(0, |v| v.len());
        if n < 1 || vectors.len() + 1 < n || vectors.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidArgument(
                "need n-1 vectors of length n".into(),
            ));
        }
        if vectors.iter().flatten().any(|&x| x >= field.q()) {
            return Err(Error::InvalidArgument("entry outside the field".into()));
        }
        let spaces: Vec<_> = (1..n).map(|i| field.rref(&vectors[..i])).collect();
        if spaces.iter().enumerate().any(|(i, s)| s.len() != i + 1) {
            return Err(Error::InvalidArgument("vectors are dependent".into()));
        }
        Ok(Flag { n, spaces })
    }

    /// `F_i = <e_1, ..., e_i>`.
    pub fn standard(field: &FiniteField, n: usize) -> Flag {
        let e: Vec<Vec<u32>> = (0..n).map(|i| unit(n, i)).collect();
        Flag::from_vectors(field, &e).unwrap()
    }

    /// `F_i = <e_n, ..., e_{n-i+1}>`.
    pub fn reversed(field: &FiniteField, n: usize) -> Flag {
        let e: Vec<Vec<u32>> = (0..n).rev().map(|i| unit(n, i)).collect();
        Flag::from_vectors(field, &e).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Basis of `F_i` for `1 <= i <= n-1`.
    pub fn space(&self, i: usize) -> &[Vec<u32>] {
        &self.spaces[i - 1]
    }

    pub fn spaces(&self) -> &[Vec<Vec<u32>>] {
        &self.spaces
    }

    /// Vectors `v_1, ..., v_{n-1}` with `F_i = span(v_1, ..., v_i)`.
    pub fn adapted_basis(&self, field: &FiniteField) -> Vec<Vec<u32>> {
        let mut vecs: Vec<Vec<u32>> = Vec::new();
        for i in 1..self.n {
            let v = self
                .space(i)
                .iter()
                .find(|v| {
                    let mut rows = vecs.clone();
                    rows.push((*v).clone());
                    field.rank(&rows) == i
                })
                .unwrap();
            vecs.push(v.clone());
        }
        vecs
    }

    /// Image under the matrix `g` acting on column vectors.
    pub fn transform(&self, field: &FiniteField, g: &[Vec<u32>]) -> Result<Flag> {
        let image: Vec<Vec<u32>> = self
            .adapted_basis(field)
            .iter()
            .map(|v| {
                (0..self.n)
                    .map(|r| {
                        (0..self.n).fold(0, |acc, c| field.add(acc, field.mul(g[r][c], v[c])))
                    })
                    .collect()
            })
            .collect();
        Flag::from_vectors(field, &image)
    }
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn frob_rows(field: &FiniteField, rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| field.frobenius(x)).collect())
        .collect()
}

pub fn frobenius_flag(field: &FiniteField, f: &Flag) -> Flag {
    Flag {
        n: f.n,
        spaces: f.spaces.iter().map(|s| frob_rows(field, s)).collect(),
    }
}

fn intersection_dim(field: &FiniteField, a: &[Vec<u32>], b: &[Vec<u32>]) -> usize {
    let both: Vec<Vec<u32>> = a.iter().chain(b).cloned().collect();
    a.len() + b.len() - field.rank(&both)
}

/// The array `d[i][j] = dim(F_i cap F2_j)` for `0 <= i, j <= n`.
pub fn rank_array(field: &FiniteField, f: &Flag, f2: &Flag) -> Result<Vec<Vec<usize>>> {
    if f.n != f2.n {
        return Err(Error::DimensionMismatch {
            expected: f.n,
            got: f2.n,
        });
    }
    let n = f.n;
    let mut d = vec![vec![0; n + 1]; n + 1];
    for i in 0..=n {
        for j in 0..=n {
            d[i][j] = if i == 0 || j == 0 {
                0
            } else if i == n {
                j
            } else if j == n {
                i
            } else {
                intersection_dim(field, f.space(i), f2.space(j))
            };
        }
    }
    Ok(d)
}

/// The rank array of a permutation in one-line notation (values `1..=n`).
pub fn permutation_rank_array(w: &[usize]) -> Vec<Vec<usize>> {
    let n = w.len();
    let mut d = vec![vec![0; n + 1]; n + 1];
    for i in 0..=n {
        for j in 0..=n {
            d[i][j] = w[..j].iter().filter(|&&x| x <= i).count();
        }
    }
    d
}

fn permutation_from_rank_array(d: &[Vec<usize>]) -> Vec<usize> {
    let n = d.len() - 1;
    (1..=n)
        .map(|j| {
            (1..=n)
                .find(|&i| d[i][j] + d[i - 1][j - 1] == d[i - 1][j] + d[i][j - 1] + 1)
                .unwrap()
        })
        .collect()
}

/// The permutation `w` (one-line notation, values `1..=n`) with
/// `dim(F_i cap F2_j) = #{k <= j : w(k) <= i}`.
pub fn relative_position(field: &FiniteField, f: &Flag, f2: &Flag) -> Result<Vec<usize>> {
    Ok(permutation_from_rank_array(&rank_array(field, f, f2)?))
}

/// `s_1 s_2 ... s_{n-1}` in one-line notation.
pub fn coxeter_element(n: usize) -> Vec<usize> {
    (2..=n).chain(std::iter::once(1)).collect()
}

pub fn longest_permutation(n: usize) -> Vec<usize> {
    (1..=n).rev().collect()
}

fn check_permutation(w: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n + 1];
    if w.len() != n || w.iter().any(|&x| x == 0 || x > n || std::mem::replace(&mut seen[x], true)) {
        return Err(Error::InvalidArgument(format!(
            "{w:?} is not a permutation of 1..={n}"
        )));
    }
    Ok(())
}

/// Normalized vectors completing `space` to a space of one dimension more,
/// one for each such space.
fn extensions(field: &FiniteField, space: &[Vec<u32>], n: usize) -> Vec<Vec<u32>> {
    let pivots: Vec<usize> = space
        .iter()
        .map(|r| r.iter().position(|&x| x != 0).unwrap())
        .collect();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let q = field.q() as usize;
    let mut out = Vec::new();
    for (lead_pos, &lead) in free.iter().enumerate() {
        let rest: Vec<usize> = free[lead_pos + 1..].to_vec();
        let count = q.pow(rest.len() as u32);
        for code in 0..count {
            let mut v = vec![0u32; n];
            v[lead] = 1;
            let mut c = code;
            for &col in &rest {
                v[col] = (c % q) as u32;
                c /= q;
            }
            out.push(v);
        }
    }
    out
}

/// Flags `F` over `F_{p^m}` with `relative_position(F, frobenius(F)) = w`.
pub fn dl_points(w: &[usize], n: usize, p: u32, m: u32) -> Result<Vec<Flag>> {
    let field = FiniteField::new(p, m)?;
    dl_points_in(&field, w, n)
}

pub fn dl_points_in(field: &FiniteField, w: &[usize], n: usize) -> Result<Vec<Flag>> {
    if n < 2 {
        return Err(Error::InvalidArgument("need n >= 2".into()));
    }
    check_permutation(w, n)?;
    let q = field.q() as f64;
    if q.powi(n as i32 - 1) * q.powi(n as i32 - 2) > MAX_CELL {
        return Err(Error::Guard(format!(
            "enumeration over q = {} with n = {n} exceeds the guard",
            field.q()
        )));
    }
    let target = permutation_rank_array(w);
    let roots = extensions(field, &[], n);
    let mut out: Vec<Flag> = roots
        .par_iter()
        .flat_map_iter(|v| {
            let mut found = Vec::new();
            let s = vec![v.clone()];
            let fs = frob_rows(field, &s);
            if consistent(field, std::slice::from_ref(&s), std::slice::from_ref(&fs), &target) {
                dfs(field, n, &target, vec![s], vec![fs], &mut found);
            }
            found
        })
        .collect();
    out.sort();
    Ok(out)
}

fn consistent(
    field: &FiniteField,
    spaces: &[Vec<Vec<u32>>],
    frob: &[Vec<Vec<u32>>],
    target: &[Vec<usize>],
) -> bool {
    let k = spaces.len();
    (1..=k).all(|b| intersection_dim(field, &spaces[k - 1], &frob[b - 1]) == target[k][b])
        && (1..k).all(|a| intersection_dim(field, &spaces[a - 1], &frob[k - 1]) == target[a][k])
}

fn dfs(
    field: &FiniteField,
    n: usize,
    target: &[Vec<usize>],
    spaces: Vec<Vec<Vec<u32>>>,
    frob: Vec<Vec<Vec<u32>>>,
    out: &mut Vec<Flag>,
) {
    if spaces.len() == n - 1 {
        out.push(Flag { n, spaces });
        return;
    }
    let last = spaces.last().unwrap();
    for v in extensions(field, last, n) {
        let mut rows = last.clone();
        rows.push(v);
        let s = field.rref(&rows);
        let fs = frob_rows(field, &s);
        let mut sp = spaces.clone();
        let mut fr = frob.clone();
        sp.push(s);
        fr.push(fs);
        if consistent(field, &sp, &fr, target) {
            dfs(field, n, target, sp, fr, out);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LusztigReport {
    pub n: usize,
    pub p: u32,
    pub m: u32,
    pub points: usize,
    pub violations: usize,
}

impl LusztigReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Checks that every point of `X(s_1 ... s_{n-1})` lies in the open cell
/// relative to the standard flag.
pub fn lusztig_containment_check(n: usize, p: u32, m: u32) -> Result<LusztigReport> {
    let field = FiniteField::new(p, m)?;
    let pts = dl_points_in(&field, &coxeter_element(n), n)?;
    let std = Flag::standard(&field, n);
    let w0 = longest_permutation(n);
    let violations = pts
        .par_iter()
        .filter(|f| relative_position(&field, &std, f).unwrap() != w0)
        .count();
    Ok(LusztigReport {
        n,
        p,
        m,
        points: pts.len(),
        violations,
    })
}

/// Whether the coordinates of `a` are linearly independent over `F_p`.
pub fn moore_criterion(field: &FiniteField, a: &[u32]) -> Result<bool> {
    if a.iter().all(|&x| x == 0) {
        return Err(Error::InvalidArgument("zero vector".into()));
    }
    if a.iter().any(|&x| x >= field.q()) {
        return Err(Error::InvalidArgument("entry outside the field".into()));
    }
    let n = a.len();
    let m = field.m() as usize;
    let prime = FiniteField::new(field.p(), 1)?;
    let rows: Vec<Vec<u32>> = (0..m)
        .map(|k| a.iter().map(|&x| field.to_coeffs(x)[k]).collect())
        .collect();
    Ok(prime.rank(&rows) == n)
}

/// The flag `F_i = F_1 + sigma(F_1) + ... + sigma^{i-1}(F_1)` with `F_1 = <a>`,
/// if all these sums are direct.
pub fn coxeter_flag_from_line(field: &FiniteField, a: &[u32]) -> Result<Option<Flag>> {
    if a.iter().all(|&x| x == 0) {
        return Err(Error::InvalidArgument("zero vector".into()));
    }
    let n = a.len();
    let mut vecs = vec![a.to_vec()];
    for _ in 1..n {
        let next = vecs.last().unwrap().iter().map(|&x| field.frobenius(x)).collect();
        vecs.push(next);
    }
    if field.rank(&vecs) < n {
        return Ok(None);
    }
    Ok(Some(Flag::from_vectors(field, &vecs[..n - 1])?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MooreReport {
    pub n: usize,
    pub p: u32,
    pub m: u32,
    pub vectors: usize,
    pub independent: usize,
    pub mismatches: usize,
}

impl MooreReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

/// Compares `moore_criterion` with direct flag construction and with membership
/// of the line in `X(s_1 ... s_{n-1})`, for every nonzero vector in `F_q^n`.
pub fn moore_cross_check(n: usize, p: u32, m: u32) -> Result<MooreReport> {
    let field = FiniteField::new(p, m)?;
    let lines: std::collections::HashSet<Vec<Vec<u32>>> = dl_points_in(&field, &coxeter_element(n), n)?
        .into_iter()
        .map(|f| f.space(1).to_vec())
        .collect();
    let q = field.q() as u64;
    let total = q
        .checked_pow(n as u32)
        .filter(|&t| t as f64 <= MAX_CELL)
        .ok_or_else(|| Error::Guard(format!("{q}^{n} vectors exceed the guard")))?;
    let results: Vec<(bool, bool)> = (1..total)
        .into_par_iter()
        .map(|mut c| {
            let a: Vec<u32> = (0..n)
                .map(|_| {
                    let d = (c % q) as u32;
                    c /= q;
                    d
                })
                .collect();
            let moore = moore_criterion(&field, &a).unwrap();
            let direct = coxeter_flag_from_line(&field, &a).unwrap().is_some();
            let member = lines.contains(&field.rref(&[a]));
            (moore, moore == direct && direct == member)
        })
        .collect();
    Ok(MooreReport {
        n,
        p,
        m,
        vectors: results.len(),
        independent: results.iter().filter(|r| r.0).count(),
        mismatches: results.iter().filter(|r| !r.1).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_basics() {
        let f8 = FiniteField::new(2, 3).unwrap();
        assert_eq!(f8.modulus(), &[1, 1, 0, 1]);
        for a in 1..8 {
            assert_eq!(f8.mul(a, f8.inv(a).unwrap()), 1);
            assert_eq!(f8.pow(a, 8), a);
        }
        let f9 = FiniteField::new(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        assert_eq!(f9.add(5, 4), f9.from_coeffs(&[0, 2]));
        assert!(FiniteField::new(4, 1).is_err());
    }

    #[test]
    fn relative_positions_of_standard_flags() {
        let f = FiniteField::new(2, 1).unwrap();
        let s = Flag::standard(&f, 4);
        let r = Flag::reversed(&f, 4);
        assert_eq!(relative_position(&f, &s, &s).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(relative_position(&f, &s, &r).unwrap(), vec![4, 3, 2, 1]);
    }

    #[test]
    fn p1_over_f4() {
        let pts = dl_points(&[2, 1], 2, 2, 2).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(dl_points(&[1, 2], 2, 2, 2).unwrap().len(), 3);
    }
}
