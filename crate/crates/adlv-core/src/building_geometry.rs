//! Alcove geometry of the standard apartment: Weyl distance, residues,
//! gates, projections, galleries, acute cones and wall distances.

use std::collections::BTreeSet;

use num_rational::Rational64;

use crate::affine_weyl::{AffineElement, AffineWeyl, FiniteWeyl};
use crate::error::{Error, Result};
use crate::nodeset::NodeSet;
use crate::sigma_structures::DiagramAutomorphism;

/// An alcove, identified with the element of `W_a` carrying the base alcove to it.
pub type Alcove = AffineElement;

/// The hyperplane `H_{alpha,k}` with `alpha` a positive root given by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    pub alpha: usize,
    pub k: i64,
}

/// The set of alcoves `base * W_P`; the base is stored minimal in its coset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    base: Alcove,
    type_set: NodeSet,
}

impl Residue {
    pub fn base(&self) -> &Alcove {
        &self.base
    }

    pub fn type_set(&self) -> NodeSet {
        self.type_set
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gallery(pub Vec<Alcove>);

#[derive(Clone, Debug)]
pub struct DoubleProjection {
    pub w1: AffineElement,
    pub r1: Residue,
    pub r1_prime: Residue,
    /// Corresponding alcoves `(x, x')` with `x` in `r1` and `x'` in `r1_prime`.
    pub pairs: Vec<(Alcove, Alcove)>,
}

#[derive(Clone, Debug)]
pub struct DrEnumeration {
    pub alcoves: Vec<Alcove>,
    pub radius: usize,
    pub count_at_radius: usize,
    pub count_at_radius_minus_two: usize,
    pub stabilized: bool,
}

impl AffineWeyl {
    pub fn check_alcove(&self, x: &AffineElement) -> Result<()> {
        self.check_element(x)?;
        if !self.in_wa(x) {
            return Err(Error::InvalidArgument(
                "alcoves are elements with trivial Omega part".into(),
            ));
        }
        Ok(())
    }

    /// `delta(x, y) = x^{-1} y`.
    pub fn weyl_distance(&self, x: &AffineElement, y: &AffineElement) -> AffineElement {
        self.mul(&self.inverse(x), y)
    }

    /// Minimal representative of `W_K delta(x, y) W_K`.
    pub fn delta_k(&self, x: &AffineElement, y: &AffineElement, k: NodeSet) -> AffineElement {
        self.min_double(&self.weyl_distance(x, y), k, k)
    }

    pub fn gallery_distance(&self, x: &AffineElement, y: &AffineElement) -> usize {
        self.length(&self.weyl_distance(x, y))
    }

    fn hyperplane_of(&self, gamma: Vec<i64>, k: i64) -> Hyperplane {
        let rd = self.root_datum();
        match rd.root_index(&gamma) {
            Some(alpha) => Hyperplane { alpha, k },
            None => {
                let neg: Vec<i64> = gamma.iter().map(|a| -a).collect();
                Hyperplane {
                    alpha: rd.root_index(&neg).expect("image of a root is a root"),
                    k: -k,
                }
            }
        }
    }

    /// The wall of `x` of type `i`, that is `x(H_i)`.
    pub fn wall(&self, x: &AffineElement, i: usize) -> Hyperplane {
        let node = self.node(i);
        let gamma = x.fin().act_root(&node.beta);
        let k: i64 = gamma.iter().zip(x.lam()).map(|(a, b)| a * b).sum::<i64>() - node.c;
        self.hyperplane_of(gamma, k)
    }

    /// The integer `m` with `m < <alpha, v> < m + 1` on the alcove `x`.
    pub fn alcove_floor(&self, x: &AffineElement, alpha: usize) -> i64 {
        let root = &self.root_datum().positive_roots()[alpha];
        let p: i64 = root.iter().zip(x.lam()).map(|(a, b)| a * b).sum();
        let pre = x.fin().act_root_inverse(root);
        if pre.iter().sum::<i64>() > 0 {
            p
        } else {
            p - 1
        }
    }

    /// Whether the alcove `x` lies in `{ <alpha, v> > k }`.
    pub fn on_positive_side(&self, x: &AffineElement, h: Hyperplane) -> bool {
        self.alcove_floor(x, h.alpha) >= h.k
    }

    /// All hyperplanes separating the alcoves `x` and `y`, sorted.
    pub fn separating_hyperplanes(&self, x: &AffineElement, y: &AffineElement) -> Vec<Hyperplane> {
        let n = self.root_datum().num_positive_roots();
        let mut out = Vec::new();
        for alpha in 0..n {
            let a = self.alcove_floor(x, alpha);
            let b = self.alcove_floor(y, alpha);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            for k in lo + 1..=hi {
                out.push(Hyperplane { alpha, k });
            }
        }
        out.sort();
        out
    }

    /// Walls of `x` separating it from the base alcove.
    pub fn descent_walls(&self, x: &AffineElement) -> BTreeSet<Hyperplane> {
        self.right_descents(x)
            .iter()
            .map(|i| self.wall(x, i))
            .collect()
    }

    pub fn residue(&self, base: &AffineElement, p: NodeSet) -> Result<Residue> {
        self.check_alcove(base)?;
        self.check_nodes(p)?;
        Ok(Residue {
            base: self.min_right(base, p),
            type_set: p,
        })
    }

    pub fn residue_contains(&self, r: &Residue, y: &AffineElement) -> bool {
        let d = self.weyl_distance(&r.base, y);
        self.in_wa(&d) && self.support(&d).is_subset(r.type_set)
    }

    /// All alcoves of a residue of finite type, canonically sorted by distance
    /// from its minimal alcove.
    pub fn residue_members(&self, r: &Residue) -> Result<Vec<Alcove>> {
        Ok(self
            .parabolic_elements(r.type_set)?
            .iter()
            .map(|u| self.mul(&r.base, u))
            .collect())
    }

    /// The gate from `b` to `r`: `b * min(delta(b, base) W_P)`.
    pub fn gate(&self, b: &AffineElement, r: &Residue) -> Alcove {
        let d = self.weyl_distance(b, &r.base);
        self.mul(b, &self.min_right(&d, r.type_set))
    }

    fn conjugated_types(&self, w1: &AffineElement, from: NodeSet, to: NodeSet) -> NodeSet {
        let w1i = self.inverse(w1);
        from.iter()
            .filter(|&j| {
                let c = self.mul(&self.mul(w1, self.s(j)), &w1i);
                to.iter().any(|i| *self.s(i) == c)
            })
            .collect()
    }

    /// Mutual projections of two residues of finite type.
    pub fn double_projection(&self, r: &Residue, r2: &Residue) -> Result<DoubleProjection> {
        let d = self.weyl_distance(&r.base, &r2.base);
        let w1 = self.min_double(&d, r.type_set, r2.type_set);
        let t1 = self.conjugated_types(&self.inverse(&w1), r.type_set, r2.type_set);
        let t1p = self.conjugated_types(&w1, r2.type_set, r.type_set);
        let r1 = self.residue(&self.gate(&r2.base, r), t1)?;
        let r1_prime = self.residue(&self.gate(&r.base, r2), t1p)?;
        let pairs = self
            .residue_members(&r1)?
            .into_iter()
            .map(|x| {
                let y = self.gate(&x, r2);
                (x, y)
            })
            .collect();
        Ok(DoubleProjection {
            w1,
            r1,
            r1_prime,
            pairs,
        })
    }

    /// Crossed hyperplane and whether the later alcove lies on its positive side.
    fn crossings(&self, gallery: &Gallery) -> Result<Vec<(Hyperplane, bool)>> {
        let mut out = Vec::new();
        for pair in gallery.0.windows(2) {
            let d = self.weyl_distance(&pair[0], &pair[1]);
            let i = (0..self.num_nodes())
                .find(|&i| *self.s(i) == d)
                .ok_or_else(|| {
                    Error::InvalidArgument("consecutive alcoves are not adjacent".into())
                })?;
            let h = self.wall(&pair[0], i);
            out.push((h, self.on_positive_side(&pair[1], h)));
        }
        Ok(out)
    }

    fn goes_in_direction(&self, crossings: &[(Hyperplane, bool)], w: &FiniteWeyl) -> bool {
        let roots = self.root_datum().positive_roots();
        crossings.iter().all(|(h, pos)| {
            let pre = w.act_root_inverse(&roots[h.alpha]);
            (pre.iter().sum::<i64>() > 0) == *pos
        })
    }

    /// All `w` in `W_0` such that the gallery goes in the `w`-direction.
    pub fn gallery_direction(&self, gallery: &Gallery) -> Result<Vec<FiniteWeyl>> {
        for x in &gallery.0 {
            self.check_alcove(x)?;
        }
        let c = self.crossings(gallery)?;
        Ok(self
            .finite_weyl_group()?
            .into_iter()
            .filter(|w| self.goes_in_direction(&c, w))
            .collect())
    }

    pub fn goes_in_w_direction(&self, gallery: &Gallery, w: &FiniteWeyl) -> Result<bool> {
        let c = self.crossings(gallery)?;
        Ok(self.goes_in_direction(&c, w))
    }

    /// The minimal gallery from `x` to `y` along the chosen reduced word.
    pub fn minimal_gallery(&self, x: &AffineElement, y: &AffineElement) -> Gallery {
        let (word, _) = self.reduced_word(&self.weyl_distance(x, y));
        let mut cur = x.clone();
        let mut out = vec![cur.clone()];
        for i in word {
            cur = self.mul(&cur, self.s(i));
            out.push(cur.clone());
        }
        Gallery(out)
    }

    pub fn is_minimal_gallery(&self, gallery: &Gallery) -> bool {
        match (gallery.0.first(), gallery.0.last()) {
            (Some(a), Some(b)) => self.gallery_distance(a, b) + 1 == gallery.0.len(),
            _ => true,
        }
    }

    /// Membership of `x` in the acute cone `C(b, w)`.
    pub fn acute_cone_member(&self, b: &Alcove, w: &FiniteWeyl, x: &Alcove) -> Result<bool> {
        self.check_alcove(b)?;
        self.check_alcove(x)?;
        self.goes_in_w_direction(&self.minimal_gallery(b, x), w)
    }

    /// Vertex of the base alcove fixed by `W_{S \ {v}}`, in coweight coordinates.
    pub fn special_vertex(&self, v: usize) -> Vec<Rational64> {
        let r = self.rank();
        let mut p = vec![Rational64::from_integer(0); r];
        if v >= 1 && v <= r {
            let theta = &self.root_datum().highest_roots()[0];
            p[v - 1] = Rational64::new(1, theta[v - 1]);
        }
        p
    }

    fn removed_node(&self, k: NodeSet) -> Result<usize> {
        self.check_nodes(k)?;
        if !self.root_datum().is_irreducible() {
            return Err(Error::InvalidArgument(
                "the affine Dynkin diagram must be connected".into(),
            ));
        }
        let rest = self.all_nodes().difference(k);
        if rest.len() != 1 {
            return Err(Error::InvalidArgument(format!(
                "K = {k:?} is not of maximal type"
            )));
        }
        Ok(rest.iter().next().unwrap())
    }

    /// Root hyperplanes through the vertex of type `K`, as `(root index, k)`.
    pub fn k_walls(&self, k: NodeSet) -> Result<Vec<Hyperplane>> {
        let v = self.removed_node(k)?;
        let p = self.special_vertex(v);
        let rd = self.root_datum();
        Ok(rd
            .positive_roots()
            .iter()
            .enumerate()
            .filter_map(|(alpha, root)| {
                let x = rd.pairing_rational(root, &p).unwrap();
                x.is_integer().then(|| Hyperplane {
                    alpha,
                    k: x.to_integer(),
                })
            })
            .collect())
    }

    /// Smallest distance `|<alpha, bary(x)> - k|` over all `K`-walls.
    pub fn wall_distance(&self, x: &Alcove, k: NodeSet) -> Result<Rational64> {
        let walls = self.k_walls(k)?;
        let b = self.barycenter(x);
        let rd = self.root_datum();
        Ok(walls
            .iter()
            .map(|h| {
                let v = rd.pairing_rational(&rd.positive_roots()[h.alpha], &b).unwrap()
                    - Rational64::from_integer(h.k);
                if v < Rational64::from_integer(0) {
                    -v
                } else {
                    v
                }
            })
            .min()
            .unwrap_or_else(|| Rational64::from_integer(i64::MAX / 4)))
    }

    /// Whether the barycenter of `x` has distance at least `margin` from every `K`-wall.
    pub fn far_from_walls(&self, x: &AffineElement, k: NodeSet, margin: i64) -> Result<bool> {
        if margin < 1 {
            return Err(Error::InvalidArgument("margin must be positive".into()));
        }
        self.check_element(x)?;
        Ok(self.wall_distance(x, k)? >= Rational64::from_integer(margin))
    }

    /// A margin beyond which `W_K w u W_K != W_K w u2 W_K` is guaranteed:
    /// the alcoves of `u W_K` and `u2 W_K` then share a `K`-chamber with `w`.
    pub fn sufficient_margin(
        &self,
        u: &AffineElement,
        u2: &AffineElement,
        k: NodeSet,
    ) -> Result<i64> {
        self.removed_node(k)?;
        let wk = self.parabolic_elements(k)?;
        let rd = self.root_datum();
        let base = self.base_barycenter();
        let mut worst = Rational64::from_integer(0);
        for x in [u, u2] {
            for y in &wk {
                let b = self.barycenter(&self.mul(x, y));
                let diff: Vec<Rational64> = b.iter().zip(&base).map(|(p, q)| p - q).collect();
                for root in rd.positive_roots() {
                    let v = rd.pairing_rational(root, &diff).unwrap();
                    let v = if v < Rational64::from_integer(0) { -v } else { v };
                    if v > worst {
                        worst = v;
                    }
                }
            }
        }
        Ok(worst.floor().to_integer() + 1)
    }

    /// Whether `W_K w u W_K` and `W_K w u2 W_K` differ.
    pub fn separates_cosets(
        &self,
        w: &AffineElement,
        u: &AffineElement,
        u2: &AffineElement,
        k: NodeSet,
    ) -> Result<bool> {
        self.check_nodes(k)?;
        if self.min_right(u, k) == self.min_right(u2, k) {
            return Err(Error::InvalidArgument("u W_K equals u2 W_K".into()));
        }
        let a = self.min_double(&self.mul(w, u), k, k);
        let b = self.min_double(&self.mul(w, u2), k, k);
        Ok(a != b)
    }

    /// Alcoves of length at most `radius` whose descent walls all lie in `h`.
    pub fn enumerate_dr_subset(&self, h: &[Hyperplane], radius: usize) -> DrEnumeration {
        let allowed: BTreeSet<Hyperplane> = h.iter().copied().collect();
        let alcoves: Vec<Alcove> = self
            .wa_ball(radius)
            .into_iter()
            .filter(|x| self.descent_walls(x).is_subset(&allowed))
            .collect();
        let count_at_radius = alcoves.len();
        let count_at_radius_minus_two = alcoves
            .iter()
            .filter(|x| self.length(x) + 2 <= radius)
            .count();
        DrEnumeration {
            alcoves,
            radius,
            count_at_radius,
            count_at_radius_minus_two,
            stabilized: count_at_radius == count_at_radius_minus_two,
        }
    }

    /// A minimal gallery from the end of `gallery` to a `sigma_j`-fixed alcove
    /// far from the finite walls, whose concatenation with `gallery` is minimal.
    /// Candidates are fixed elements of length at most `radius`.
    pub fn extend_gallery(
        &self,
        gallery: &Gallery,
        sigma_j: &DiagramAutomorphism,
        margin: i64,
        radius: usize,
    ) -> Result<Gallery> {
        let (first, last) = match (gallery.0.first(), gallery.0.last()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::InvalidArgument("empty gallery".into())),
        };
        self.check_alcove(first)?;
        self.check_alcove(last)?;
        if !self.is_minimal_gallery(gallery) {
            return Err(Error::InvalidArgument("gallery is not minimal".into()));
        }
        let d = self.weyl_distance(first, last);
        if !sigma_j.fixes(self, last) || !sigma_j.fixes(self, &d) {
            return Err(Error::NotRational(
                "end alcove and distance must be fixed".into(),
            ));
        }
        if sigma_j.rational_rank() == 0 {
            return Err(Error::Hypothesis("rational rank is zero".into()));
        }
        let k0 = self.all_nodes().without(0);
        self.far_from_walls(last, k0, margin)?;
        let ld = self.length(&d);
        let mut best = Rational64::from_integer(0);
        for y in sigma_j.fixed_elements(self, radius) {
            let end = self.mul(last, &y);
            if self.length(&self.mul(&d, &y)) != ld + self.length(&y) {
                continue;
            }
            let dist = self.wall_distance(&end, k0)?;
            if dist >= Rational64::from_integer(margin) {
                return Ok(self.minimal_gallery(last, &end));
            }
            best = best.max(dist);
        }
        Err(Error::SearchExhausted(format!(
            "no fixed alcove within radius {radius} has wall distance >= {margin}; \
             largest distance found is {best}"
        )))
    }
}
