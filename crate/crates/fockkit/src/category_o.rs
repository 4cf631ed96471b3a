//! Dictionaries between the rational-parameter presentation and affine
//! weights: the theta statistic and the order it induces on standard
//! labels, block origin shifts, an exact pairing identity relating the
//! two sides, and decomposition matrices of block families computed
//! through the parabolic engine.

use crate::affine::{AffineWeight, KappaMode, LinkageContext};
use crate::combinatorics::{embed_weight, Composition, MultiPartition};
use crate::fock::DecompMatrix;
use crate::kl::{character_matrix, KlEngine};
use crate::rat::{is_positive_integer, rat, rat_sum, Rat};
use crate::{Error, Result};
use std::collections::BTreeSet;

/// Rational parameter pack `(h, h_1, ..., h_l)` with the component
/// parameters constrained to sum to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CherednikParams {
    h: Rat,
    hs: Vec<Rat>,
}

impl CherednikParams {
    /// Build from `h` and the first `l - 1` component parameters; the
    /// last one is pinned by the zero-sum constraint.
    pub fn from_h_head(h: Rat, head: &[Rat]) -> CherednikParams {
        let mut hs = head.to_vec();
        hs.push(-rat_sum(head));
        CherednikParams { h, hs }
    }

    /// Derive the parameters attached to a block composition `nu` and a
    /// nonzero level parameter `kappa`: `h = 1/kappa` and
    /// `h_p = bullet(nu)_p / kappa - m / (l kappa)`.
    pub fn from_nu_kappa(nu: &Composition, kappa: Rat) -> Result<CherednikParams> {
        if nu.is_empty() {
            return Err(Error::InvalidInput("empty block composition".into()));
        }
        if kappa == rat(0) {
            return Err(Error::InvalidInput("kappa must be nonzero".into()));
        }
        let l = nu.len() as i128;
        let m = nu.total() as i128;
        let h = rat(1) / kappa;
        let bullet = nu.bullet();
        let hs: Vec<Rat> = bullet
            .parts()
            .iter()
            .map(|&b| rat(b as i128) / kappa - rat(m) / (rat(l) * kappa))
            .collect();
        Ok(CherednikParams { h, hs })
    }

    pub fn h(&self) -> Rat {
        self.h
    }

    /// The component parameters `(h_1, ..., h_l)`.
    pub fn hs(&self) -> &[Rat] {
        &self.hs
    }

    /// Number of components `l`.
    pub fn level(&self) -> usize {
        self.hs.len()
    }

    /// The reflection parameter of the other presentation, `k = -h`.
    pub fn k(&self) -> Rat {
        -self.h
    }

    /// Prefix sum `h_1 + ... + h_{p-1}` (zero for `p = 1`).
    pub fn prefix(&self, p: usize) -> Rat {
        rat_sum(&self.hs[..p.saturating_sub(1).min(self.hs.len())])
    }

    /// Exponent of the Hecke deformation parameter `q` as a rational
    /// multiple of `2*pi*i`.
    pub fn q_exponent(&self) -> Rat {
        self.h
    }

    /// Exponent of the `p`-th mass parameter `q_p` as a rational
    /// multiple of `2*pi*i`: `h_1 + ... + h_{p-1} + (p-1)/l`.
    pub fn q_p_exponent(&self, p: usize) -> Result<Rat> {
        let l = self.level();
        if p < 1 || p > l {
            return Err(Error::InvalidInput(format!(
                "component index {p} out of range 1..={l}"
            )));
        }
        Ok(self.prefix(p) + rat((p as i128) - 1) / rat(l as i128))
    }
}

/// The scalar attached to a standard label, normalized so the empty
/// label gets zero; only differences of these values carry meaning.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ThetaValue {
    pub value: Rat,
}

/// The grading scalar of the standard module labelled by `lam`:
/// `l * sum_p |lam_p| (h_1 + ... + h_{p-1})
///  - h l * sum_p (n(lam_p) - n(t(lam_p)))`.
pub fn theta(lam: &MultiPartition, params: &CherednikParams) -> Result<ThetaValue> {
    let l = params.level();
    if lam.level() != l {
        return Err(Error::InvalidInput(format!(
            "label has {} components, parameters have {l}",
            lam.level()
        )));
    }
    let lr = rat(l as i128);
    let mut value = rat(0);
    for (p0, comp) in lam.components().iter().enumerate() {
        value += lr * rat(comp.weight() as i128) * params.prefix(p0 + 1);
        value -= params.h() * lr * rat(comp.n_stat() - comp.transpose().n_stat());
    }
    Ok(ThetaValue { value })
}

/// Outcome of comparing two standard labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardOrder {
    /// The labels coincide.
    Equal,
    /// The left standard module is strictly greater.
    LeftGreater,
    /// The right standard module is strictly greater.
    RightGreater,
    /// The theta difference is not a nonzero integer.
    Incomparable,
}

/// Compare two standard labels: the right one is strictly greater
/// exactly when `theta(left) - theta(right)` is a positive integer.
pub fn cherednik_order(
    lam: &MultiPartition,
    mu: &MultiPartition,
    params: &CherednikParams,
) -> Result<StandardOrder> {
    if lam == mu {
        return Ok(StandardOrder::Equal);
    }
    let d = theta(lam, params)?.value - theta(mu, params)?.value;
    if is_positive_integer(&d) {
        Ok(StandardOrder::RightGreater)
    } else if is_positive_integer(&(-d)) {
        Ok(StandardOrder::LeftGreater)
    } else {
        Ok(StandardOrder::Incomparable)
    }
}

/// Classical origin shift for the parabolic block attached to `nu` at
/// level parameter `c`: the constant `-c * p / l` on the `p`-th block.
pub fn parabolic_origin(nu: &Composition, c: Rat) -> Vec<Rat> {
    let l = nu.len() as i128;
    let mut out = Vec::with_capacity(nu.total() as usize);
    for (p0, &np) in nu.parts().iter().enumerate() {
        let val = -c * rat(p0 as i128 + 1) / rat(l);
        out.extend(std::iter::repeat(val).take(np as usize));
    }
    out
}

/// Classical origin shift attached to a multicharge composition `s`:
/// the constant `s_p + i_p - m - 1` on the `p`-th block, so that adding
/// `rho` produces the ramp `(s_p, s_p - 1, ..., 1)` on each block.
pub fn multicharge_origin(s: &Composition) -> Vec<Rat> {
    let m = s.total() as i128;
    let mut out = Vec::with_capacity(s.total() as usize);
    for (p0, &sp) in s.parts().iter().enumerate() {
        let ip = s.block_start(p0 + 1) as i128;
        let val = rat(sp as i128 + ip - m - 1);
        out.extend(std::iter::repeat(val).take(sp as usize));
    }
    out
}

/// The shifted affine weight of a label in the parabolic block family:
/// classical part `embed(lam, nu) + origin`, level `c`, delta pinned by
/// the level normalization at `kappa`.
fn shifted_weight(
    mp: &MultiPartition,
    nu: &Composition,
    origin: &[Rat],
    kappa: Rat,
) -> Result<AffineWeight> {
    let emb = embed_weight(mp, nu)?;
    let c = kappa - rat(nu.total() as i128);
    let classical: Vec<Rat> = emb
        .iter()
        .zip(origin)
        .map(|(&a, o)| rat(a as i128) + *o)
        .collect();
    Ok(AffineWeight::new(rat(0), classical, c).tilde_normalized(kappa))
}

/// The block-origin weight of a label for the parabolic family at
/// `(nu, kappa)`.
pub fn parabolic_label_weight(
    mp: &MultiPartition,
    nu: &Composition,
    kappa: Rat,
) -> Result<AffineWeight> {
    let c = kappa - rat(nu.total() as i128);
    shifted_weight(mp, nu, &parabolic_origin(nu, c), kappa)
}

/// Exact check that the normalized theta difference of the reversed
/// labels agrees with the affine pairing of their shifted weights
/// against `origin + c * omega_0`. Holds identically; a `false` points
/// at an inconsistency between the two parameter dictionaries.
pub fn theta_pairing_identity(
    lam: &MultiPartition,
    mu: &MultiPartition,
    nu: &Composition,
    kappa: Rat,
) -> Result<bool> {
    if !lam.fits(nu) || !mu.fits(nu) {
        return Err(Error::InvalidInput(
            "labels must fit inside the block composition".into(),
        ));
    }
    let params = CherednikParams::from_nu_kappa(nu, kappa)?;
    let l = nu.len() as i128;
    let c = kappa - rat(nu.total() as i128);
    let theta_diff =
        theta(&mu.reversed(), &params)?.value - theta(&lam.reversed(), &params)?.value;
    let lhs = c * theta_diff / rat(l);
    let origin = parabolic_origin(nu, c);
    let wl = shifted_weight(lam, nu, &origin, kappa)?;
    let wm = shifted_weight(mu, nu, &origin, kappa)?;
    let target = AffineWeight::new(rat(0), origin, c);
    let rhs = wl.minus(&wm).pairing(&target);
    Ok(lhs == rhs)
}

/// One-way compatibility of the two orders on a pair of labels: when
/// the shifted weight of `mu` lies below that of `lam` in the linkage
/// order, the theta difference of the reversed labels must be a
/// positive integer. Returns whether the implication holds.
pub fn linkage_implies_order(
    lam: &MultiPartition,
    mu: &MultiPartition,
    nu: &Composition,
    kappa: Rat,
    budget: usize,
) -> Result<bool> {
    if lam == mu {
        return Ok(true);
    }
    let wl = parabolic_label_weight(lam, nu, kappa)?;
    let wm = parabolic_label_weight(mu, nu, kappa)?;
    let mut ctx = LinkageContext::new(nu.clone(), KappaMode::Rational(kappa));
    ctx.budget = budget;
    if !ctx.leq(&wm, &wl)? {
        return Ok(true);
    }
    let params = CherednikParams::from_nu_kappa(nu, kappa)?;
    let d = theta(&mu.reversed(), &params)?.value - theta(&lam.reversed(), &params)?.value;
    Ok(is_positive_integer(&d))
}

/// Standard/simple transition data of a family of labels inside one
/// block union: `delta[i][j]` expands the `i`-th simple over the
/// family's standard labels (signed, unitriangular), `nabla[i][j]` is
/// the standard-module multiplicity `[Delta_i : S_j]`, taken from the
/// inverse over the whole saturated block.
pub struct BlockMatrices {
    pub labels: Vec<MultiPartition>,
    pub delta: Vec<Vec<i64>>,
    pub nabla: Vec<Vec<i64>>,
}

/// Run the parabolic engine on the weights `embed(label) + origin` and
/// restrict the resulting character matrices to the given labels.
///
/// `nabla` is always read off the inverse computed over the whole
/// saturated block, so its entries are the true standard-module
/// multiplicities even when a simple character involves standards
/// outside the family. `delta` is the signed simple-over-standard
/// matrix restricted to the family; it is the inverse of `nabla`
/// exactly when the family is closed under the simple characters'
/// support, which is the case for the multicharge origin but can fail
/// for block origins with interleaved entries.
pub fn label_matrices(
    engine: &KlEngine,
    nu: &Composition,
    kappa: Rat,
    labels: &[MultiPartition],
    origin: &[Rat],
    budget: usize,
) -> Result<BlockMatrices> {
    if labels.is_empty() {
        return Err(Error::InvalidInput("no labels".into()));
    }
    if origin.len() != nu.total() as usize {
        return Err(Error::InvalidInput(format!(
            "origin length {} does not match |nu| = {}",
            origin.len(),
            nu.total()
        )));
    }
    let mut targets = Vec::with_capacity(labels.len());
    for mp in labels {
        targets.push(shifted_weight(mp, nu, origin, kappa)?);
    }
    let cm = character_matrix(engine, nu, kappa, &targets, budget)?;
    let mut pos_of_label = Vec::with_capacity(labels.len());
    for t in &targets {
        let idx = cm
            .index_of(t)
            .ok_or_else(|| Error::Internal("target lost during saturation".into()))?;
        pos_of_label.push(idx);
    }
    let picked: BTreeSet<usize> = pos_of_label.iter().copied().collect();
    if picked.len() != labels.len() {
        return Err(Error::Internal(
            "distinct labels produced equal block weights".into(),
        ));
    }
    let support_closed = picked.iter().all(|&ri| {
        cm.simple_in_standard[ri]
            .iter()
            .enumerate()
            .all(|(ci, &x)| x == 0 || picked.contains(&ci))
    });
    let k = labels.len();
    let delta: Vec<Vec<i64>> = pos_of_label
        .iter()
        .map(|&ri| {
            pos_of_label
                .iter()
                .map(|&ci| cm.simple_in_standard[ri][ci])
                .collect()
        })
        .collect();
    let nabla: Vec<Vec<i64>> = pos_of_label
        .iter()
        .map(|&ri| {
            pos_of_label
                .iter()
                .map(|&ci| cm.multiplicity[ri][ci])
                .collect()
        })
        .collect();
    if support_closed {
        for i in 0..k {
            for j in 0..k {
                let mut acc = 0i64;
                for t in 0..k {
                    acc += delta[i][t] * nabla[t][j];
                }
                if acc != i64::from(i == j) {
                    return Err(Error::Internal(
                        "restricted transition matrices fail to invert each other".into(),
                    ));
                }
            }
        }
    }
    Ok(BlockMatrices {
        labels: labels.to_vec(),
        delta,
        nabla,
    })
}

/// Standard/simple matrices over all weight-`n` multipartitions fitting
/// `nu`, for the parabolic block family at `(nu, kappa)` with the block
/// origin shift.
pub fn parabolic_multiplicities(
    engine: &KlEngine,
    nu: &Composition,
    kappa: Rat,
    n: u32,
    budget: usize,
) -> Result<BlockMatrices> {
    let labels = MultiPartition::all_fitting(n, nu);
    let c = kappa - rat(nu.total() as i128);
    let origin = parabolic_origin(nu, c);
    label_matrices(engine, nu, kappa, &labels, &origin, budget)
}

/// Decomposition matrices of the family of multipartitions of `n`
/// fitting the multicharge composition `s`, computed through the
/// multicharge origin at `kappa = -e`. Unlike the wedge-model route,
/// `e = 1` is accepted here.
pub fn block_decomposition_numbers(
    engine: &KlEngine,
    n: u32,
    s: &Composition,
    e: u32,
) -> Result<DecompMatrix> {
    if e < 1 {
        return Err(Error::InvalidInput(
            "quantum parameter e must be a positive integer".into(),
        ));
    }
    if s.is_empty() || s.parts().iter().any(|&x| x == 0) {
        return Err(Error::InvalidInput(
            "multicharge blocks must be positive".into(),
        ));
    }
    let labels = MultiPartition::all_fitting(n, s);
    let charge: Vec<i64> = s.parts().iter().rev().map(|&x| x as i64).collect();
    if n == 0 || labels.len() == 1 {
        let k = labels.len();
        let eye: Vec<Vec<i64>> = (0..k)
            .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
            .collect();
        return Ok(DecompMatrix {
            labels: labels.iter().map(|m| m.reversed()).collect(),
            window_labels: labels,
            charge,
            delta: eye.clone(),
            nabla: eye,
        });
    }
    let kappa = rat(-(e as i128));
    let origin = multicharge_origin(s);
    let bm = label_matrices(engine, s, kappa, &labels, &origin, 1_000_000)?;
    Ok(DecompMatrix {
        labels: bm.labels.iter().map(|m| m.reversed()).collect(),
        window_labels: bm.labels,
        charge,
        delta: bm.delta,
        nabla: bm.nabla,
    })
}
