//! Finite reduced root systems with the adjoint coweight lattice.
//!
//! Roots are integer vectors in simple-root coordinates, coweights are integer
//! vectors in fundamental-coweight coordinates, so that the pairing is the dot
//! product. The Weyl group acts on coweights through the Cartan matrix.

use std::collections::HashMap;
use std::fmt;

use num_rational::Rational64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DynkinType {
    A,
    B,
    C,
    D,
}

impl DynkinType {
    pub fn parse(s: &str) -> Result<DynkinType> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(DynkinType::A),
            "B" => Ok(DynkinType::B),
            "C" => Ok(DynkinType::C),
            "D" => Ok(DynkinType::D),
            other => Err(Error::Unsupported(format!(
                "Dynkin type {other:?} (supported: A, B, C, D)"
            ))),
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            DynkinType::A => "A",
            DynkinType::B => "B",
            DynkinType::C => "C",
            DynkinType::D => "D",
        }
    }

    fn min_rank(self) -> usize {
        match self {
            DynkinType::A => 1,
            DynkinType::B | DynkinType::C => 2,
            DynkinType::D => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub ty: DynkinType,
    pub rank: usize,
    /// Index of the first simple root of this component.
    pub offset: usize,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.ty.letter(), self.rank)
    }
}

/// The finite abelian group Lambda / Q^vee with chosen minuscule representatives.
#[derive(Clone, Debug)]
pub struct OmegaGroup {
    reps: Vec<Vec<i64>>,
    table: Vec<Vec<usize>>,
    cyclic: bool,
}

impl OmegaGroup {
    pub fn order(&self) -> usize {
        self.reps.len()
    }

    /// Coweight representative of class `k`; zero or a sum of minuscule coweights.
    pub fn rep(&self, k: usize) -> &[i64] {
        &self.reps[k]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.table[a][b] == 0).unwrap()
    }

    /// True when class `k` equals the `k`-th power of class 1.
    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    components: Vec<Component>,
    rank: usize,
    gram: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    root_index: HashMap<Vec<i64>, usize>,
    coroots: Vec<Vec<i64>>,
    coroot_coweights: Vec<Vec<i64>>,
    highest_roots: Vec<Vec<i64>>,
    two_rho: Vec<i64>,
    fundamental_coweights: Vec<Vec<Rational64>>,
    coroot_solver: Vec<Vec<Rational64>>,
    omega: OmegaGroup,
}

fn component_gram(ty: DynkinType, n: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; n]; n];
    for i in 0..n {
        g[i][i] = 2;
    }
    for i in 0..n.saturating_sub(1) {
        g[i][i + 1] = -1;
        g[i + 1][i] = -1;
    }
    match ty {
        DynkinType::A => {}
        DynkinType::B => g[n - 1][n - 1] = 1,
        DynkinType::C => {
            g[n - 1][n - 1] = 4;
            g[n - 2][n - 1] = -2;
            g[n - 1][n - 2] = -2;
        }
        DynkinType::D => {
            g[n - 2][n - 1] = 0;
            g[n - 1][n - 2] = 0;
            g[n - 3][n - 1] = -1;
            g[n - 1][n - 3] = -1;
        }
    }
    g
}

fn rational_inverse(m: &[Vec<i64>]) -> Vec<Vec<Rational64>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational64>> = m
        .iter()
        .map(|row| row.iter().map(|&x| Rational64::from_integer(x)).collect())
        .collect();
    let mut inv: Vec<Vec<Rational64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Rational64::from_integer((i == j) as i64))
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != Rational64::from_integer(0)).unwrap();
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != Rational64::from_integer(0) {
                    for j in 0..n {
                        let (x, y) = (a[col][j], inv[col][j]);
                        a[r][j] -= f * x;
                        inv[r][j] -= f * y;
                    }
                }
            }
        }
    }
    inv
}

fn is_positive(v: &[i64]) -> bool {
    v.iter().all(|&x| x >= 0) && v.iter().any(|&x| x > 0)
}

impl RootDatum {
    /// Irreducible root datum of the given type and rank.
    pub fn new(ty: DynkinType, rank: usize) -> Result<RootDatum> {
        RootDatum::from_components(&[(ty, rank)])
    }

    /// Root datum of a product of irreducible types; simple roots are numbered
    /// consecutively through the components.
    pub fn from_components(parts: &[(DynkinType, usize)]) -> Result<RootDatum> {
        if parts.is_empty() {
            return Err(Error::Unsupported("empty list of components".into()));
        }
        let mut components = Vec::new();
        let mut offset = 0;
        for &(ty, n) in parts {
            if n < ty.min_rank() {
                return Err(Error::Unsupported(format!(
                    "type {}{} (rank must be at least {})",
                    ty.letter(),
                    n,
                    ty.min_rank()
                )));
            }
            components.push(Component { ty, rank: n, offset });
            offset += n;
        }
        let rank = offset;
        if rank > 60 {
            return Err(Error::Unsupported(format!("total rank {rank} is too large")));
        }
        let mut gram = vec![vec![0i64; rank]; rank];
        for c in &components {
            let g = component_gram(c.ty, c.rank);
            for i in 0..c.rank {
                for j in 0..c.rank {
                    gram[c.offset + i][c.offset + j] = g[i][j];
                }
            }
        }
        let cartan: Vec<Vec<i64>> = (0..rank)
            .map(|i| (0..rank).map(|j| 2 * gram[i][j] / gram[i][i]).collect())
            .collect();

        let mut positive_roots: Vec<Vec<i64>> = Vec::new();
        let mut root_index = HashMap::new();
        let mut queue: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                let mut e = vec![0; rank];
                e[i] = 1;
                e
            })
            .collect();
        while let Some(beta) = queue.pop() {
            if root_index.contains_key(&beta) {
                continue;
            }
            root_index.insert(beta.clone(), 0);
            for i in 0..rank {
                let c: i64 = (0..rank).map(|j| beta[j] * cartan[i][j]).sum();
                if c != 0 {
                    let mut b = beta.clone();
                    b[i] -= c;
                    if is_positive(&b) && !root_index.contains_key(&b) {
                        queue.push(b);
                    }
                }
            }
            positive_roots.push(beta);
        }
        positive_roots.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        root_index.clear();
        for (k, r) in positive_roots.iter().enumerate() {
            root_index.insert(r.clone(), k);
        }

        let norm = |b: &[i64]| -> i64 {
            (0..rank)
                .map(|i| (0..rank).map(|j| b[i] * gram[i][j] * b[j]).sum::<i64>())
                .sum()
        };
        let coroots: Vec<Vec<i64>> = positive_roots
            .iter()
            .map(|b| {
                let nb = norm(b);
                (0..rank).map(|i| b[i] * gram[i][i] / nb).collect()
            })
            .collect();
        let coroot_coweights: Vec<Vec<i64>> = positive_roots
            .iter()
            .map(|b| {
                let nb = norm(b);
                (0..rank)
                    .map(|j| 2 * (0..rank).map(|i| gram[j][i] * b[i]).sum::<i64>() / nb)
                    .collect()
            })
            .collect();

        let highest_roots: Vec<Vec<i64>> = components
            .iter()
            .map(|c| {
                positive_roots
                    .iter()
                    .filter(|r| {
                        r.iter()
                            .enumerate()
                            .all(|(i, &x)| x == 0 || (i >= c.offset && i < c.offset + c.rank))
                    })
                    .max_by_key(|r| r.iter().sum::<i64>())
                    .unwrap()
                    .clone()
            })
            .collect();
        let mut two_rho = vec![0i64; rank];
        for r in &positive_roots {
            for i in 0..rank {
                two_rho[i] += r[i];
            }
        }

        let transpose: Vec<Vec<i64>> = (0..rank)
            .map(|i| (0..rank).map(|j| cartan[j][i]).collect())
            .collect();
        let coroot_solver = rational_inverse(&transpose);
        let fundamental_coweights: Vec<Vec<Rational64>> = (0..rank)
            .map(|i| (0..rank).map(|j| coroot_solver[j][i]).collect())
            .collect();

        let mut rd = RootDatum {
            components,
            rank,
            gram,
            cartan,
            positive_roots,
            root_index,
            coroots,
            coroot_coweights,
            highest_roots,
            two_rho,
            fundamental_coweights,
            coroot_solver,
            omega: OmegaGroup {
                reps: vec![],
                table: vec![],
                cyclic: true,
            },
        };
        rd.omega = rd.build_omega();
        Ok(rd)
    }

    fn build_omega(&self) -> OmegaGroup {
        let mut per_component: Vec<(Vec<Vec<i64>>, bool)> = Vec::new();
        for (ci, c) in self.components.iter().enumerate() {
            let theta = &self.highest_roots[ci];
            let minuscule: Vec<Vec<i64>> = (c.offset..c.offset + c.rank)
                .filter(|&i| theta[i] == 1)
                .map(|i| {
                    let mut v = vec![0; self.rank];
                    v[i] = 1;
                    v
                })
                .collect();
            let size = minuscule.len() + 1;
            let class_of = |v: &[i64]| -> usize {
                if self.in_coroot_lattice(v) {
                    return 0;
                }
                minuscule
                    .iter()
                    .position(|m| {
                        let d: Vec<i64> = v.iter().zip(m).map(|(a, b)| a - b).collect();
                        self.in_coroot_lattice(&d)
                    })
                    .map(|p| p + 1)
                    .unwrap()
            };
            let generator = minuscule.iter().find(|m| {
                let mut acc = (*m).clone();
                let mut order = 1;
                while !self.in_coroot_lattice(&acc) {
                    for (a, b) in acc.iter_mut().zip(m.iter()) {
                        *a += b;
                    }
                    order += 1;
                }
                order == size
            });
            match generator {
                Some(g) => {
                    let mut list = vec![vec![0; self.rank]];
                    let mut acc = g.clone();
                    for _ in 1..size {
                        let k = class_of(&acc);
                        list.push(minuscule[k - 1].clone());
                        for (a, b) in acc.iter_mut().zip(g.iter()) {
                            *a += b;
                        }
                    }
                    per_component.push((list, true));
                }
                None => {
                    let mut list = vec![vec![0; self.rank]];
                    list.extend(minuscule.iter().cloned());
                    per_component.push((list, false));
                }
            }
        }
        let mut reps: Vec<Vec<i64>> = vec![vec![0; self.rank]];
        for (list, _) in per_component.iter().rev() {
            let mut next = Vec::new();
            for r in list {
                for prev in &reps {
                    next.push(r.iter().zip(prev).map(|(a, b)| a + b).collect());
                }
            }
            reps = next;
        }
        let cyclic = per_component.len() == 1 && per_component[0].1;
        let class = |v: &[i64]| -> usize {
            reps.iter()
                .position(|m| {
                    let d: Vec<i64> = v.iter().zip(m).map(|(a, b)| a - b).collect();
                    self.in_coroot_lattice(&d)
                })
                .unwrap()
        };
        let table = (0..reps.len())
            .map(|a| {
                (0..reps.len())
                    .map(|b| {
                        let s: Vec<i64> = reps[a].iter().zip(&reps[b]).map(|(x, y)| x + y).collect();
                        class(&s)
                    })
                    .collect()
            })
            .collect();
        OmegaGroup { reps, table, cyclic }
    }

    fn in_coroot_lattice(&self, v: &[i64]) -> bool {
        (0..self.rank).all(|i| {
            let x: Rational64 = (0..self.rank)
                .map(|j| self.coroot_solver[i][j] * Rational64::from_integer(v[j]))
                .sum();
            x.is_integer()
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_irreducible(&self) -> bool {
        self.components.len() == 1
    }

    /// `cartan()[i][j] = <alpha_j, alpha_i^vee>`; row `i` is `alpha_i^vee` in coweight coordinates.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Integer multiple of the invariant form on simple roots.
    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn root_index(&self, root: &[i64]) -> Option<usize> {
        self.root_index.get(root).copied()
    }

    /// Positive coroots in simple-coroot coordinates, aligned with `positive_roots`.
    pub fn coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    /// Positive coroots in fundamental-coweight coordinates.
    pub fn coroot_coweights(&self) -> &[Vec<i64>] {
        &self.coroot_coweights
    }

    pub fn highest_roots(&self) -> &[Vec<i64>] {
        &self.highest_roots
    }

    pub fn two_rho(&self) -> &[i64] {
        &self.two_rho
    }

    /// Fundamental coweights in simple-coroot coordinates.
    pub fn fundamental_coweights(&self) -> &[Vec<Rational64>] {
        &self.fundamental_coweights
    }

    pub fn omega(&self) -> &OmegaGroup {
        &self.omega
    }

    /// `<alpha, lam>` for a root in simple-root coordinates and a coweight.
    pub fn pairing(&self, alpha: &[i64], lam: &[i64]) -> Result<i64> {
        self.check_dim(alpha.len())?;
        self.check_dim(lam.len())?;
        Ok(alpha.iter().zip(lam).map(|(a, b)| a * b).sum())
    }

    pub fn pairing_rational(&self, alpha: &[i64], lam: &[Rational64]) -> Result<Rational64> {
        self.check_dim(alpha.len())?;
        self.check_dim(lam.len())?;
        Ok(alpha
            .iter()
            .zip(lam)
            .map(|(a, b)| Rational64::from_integer(*a) * b)
            .sum())
    }

    pub fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got,
            });
        }
        Ok(())
    }

    /// Membership of a coweight in the coroot lattice.
    pub fn in_coroot_lattice_checked(&self, lam: &[i64]) -> Result<bool> {
        self.check_dim(lam.len())?;
        Ok(self.in_coroot_lattice(lam))
    }

    /// Class of `lam` in Lambda / Q^vee, as an index into the Omega group.
    pub fn omega_component(&self, lam: &[i64]) -> Result<usize> {
        self.check_dim(lam.len())?;
        Ok(self.omega_class(lam))
    }

    /// As `omega_component`, for a coweight given with rational coordinates.
    pub fn omega_component_rational(&self, lam: &[Rational64]) -> Result<usize> {
        self.check_dim(lam.len())?;
        if lam.iter().any(|x| !x.is_integer()) {
            return Err(Error::NotInLattice(lam.iter().map(|x| x.to_integer()).collect()));
        }
        let v: Vec<i64> = lam.iter().map(|x| x.to_integer()).collect();
        Ok(self.omega_class(&v))
    }

    pub(crate) fn omega_class(&self, lam: &[i64]) -> usize {
        let reps = &self.omega.reps;
        if reps.len() == 1 {
            return 0;
        }
        reps.iter()
            .position(|m| {
                let d: Vec<i64> = lam.iter().zip(m).map(|(a, b)| a - b).collect();
                self.in_coroot_lattice(&d)
            })
            .expect("every coweight lies in some class")
    }

    /// `s_i(lam)` for a finite simple reflection (0-based root index).
    pub fn reflect_coweight(&self, i: usize, lam: &[i64]) -> Vec<i64> {
        let c = lam[i];
        lam.iter()
            .zip(&self.cartan[i])
            .map(|(x, a)| x - c * a)
            .collect()
    }

    /// `s_i(beta)` for a root in simple-root coordinates.
    pub fn reflect_root(&self, i: usize, beta: &[i64]) -> Vec<i64> {
        let c: i64 = beta.iter().zip(&self.cartan[i]).map(|(b, a)| b * a).sum();
        let mut out = beta.to_vec();
        out[i] -= c;
        out
    }

    /// The W_0-orbit of a coweight, sorted.
    pub fn coweight_orbit(&self, lam: &[i64]) -> Vec<Vec<i64>> {
        let mut seen = std::collections::BTreeSet::new();
        let mut stack = vec![lam.to_vec()];
        while let Some(v) = stack.pop() {
            if seen.insert(v.clone()) {
                for i in 0..self.rank {
                    if v[i] != 0 {
                        stack.push(self.reflect_coweight(i, &v));
                    }
                }
            }
        }
        seen.into_iter().collect()
    }

    /// The dominant representative of the W_0-orbit of a coweight.
    pub fn dominant(&self, lam: &[i64]) -> Vec<i64> {
        let mut v = lam.to_vec();
        while let Some(i) = (0..self.rank).find(|&i| v[i] < 0) {
            v = self.reflect_coweight(i, &v);
        }
        v
    }

    pub fn is_dominant(&self, lam: &[i64]) -> bool {
        lam.iter().all(|&x| x >= 0)
    }

    pub fn name(&self) -> String {
        self.components
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("x")
    }
}

impl fmt::Display for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_and_a2_basics() {
        let a1 = RootDatum::new(DynkinType::A, 1).unwrap();
        assert_eq!(a1.num_positive_roots(), 1);
        assert_eq!(a1.omega().order(), 2);
        let a2 = RootDatum::new(DynkinType::A, 2).unwrap();
        assert_eq!(a2.pairing(&[1, 0], &[1, 0]).unwrap(), 1);
        assert_eq!(a2.pairing(&[0, 1], &[1, 0]).unwrap(), 0);
        assert_eq!(a2.pairing(&a2.highest_roots()[0], &[1, 0]).unwrap(), 1);
        assert_eq!(a2.omega_component(&[1, 0]).unwrap(), 1);
        assert_eq!(a2.omega_component(&[2, -1]).unwrap(), 0);
        assert!(a2.pairing(&[1], &[1, 0]).is_err());
    }

    #[test]
    fn highest_roots_match_tables() {
        let b3 = RootDatum::new(DynkinType::B, 3).unwrap();
        assert_eq!(b3.highest_roots()[0], vec![1, 2, 2]);
        let c3 = RootDatum::new(DynkinType::C, 3).unwrap();
        assert_eq!(c3.highest_roots()[0], vec![2, 2, 1]);
        let d4 = RootDatum::new(DynkinType::D, 4).unwrap();
        assert_eq!(d4.highest_roots()[0], vec![1, 2, 1, 1]);
        assert_eq!(d4.omega().order(), 4);
        assert!(!d4.omega().is_cyclic());
        let d5 = RootDatum::new(DynkinType::D, 5).unwrap();
        assert!(d5.omega().is_cyclic());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RootDatum::new(DynkinType::D, 3).is_err());
        assert!(RootDatum::new(DynkinType::B, 1).is_err());
        assert!(DynkinType::parse("G").is_err());
    }
}
