//! Canonical-basis computation in the Hecke algebra by bar-invariant
//! Gaussian elimination.
//!
//! This is an independent cross-check for the recursive engine in
//! [`crate::kl`]: it never uses the defining recursion. Instead it
//! computes the bar involution on the standard basis from scratch
//! (`bar(H_s) = H_s + (v - v^{-1})`, extended multiplicatively along
//! reduced words) and solves the unitriangular fixed-point system for
//! the canonical basis elements, whose coefficients recover the
//! polynomials `P_{y,w}(q)` under `q = v^{-2}` rescaling.

use crate::affine::AffinePermutation;
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Laurent polynomial in `v` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VLaurent {
    /// exponent -> coefficient, zeros never stored.
    terms: BTreeMap<i32, i64>,
}

impl VLaurent {
    pub fn zero() -> Self {
        VLaurent::default()
    }

    pub fn one() -> Self {
        VLaurent::monomial(0, 1)
    }

    pub fn monomial(exp: i32, coeff: i64) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(exp, coeff);
        }
        VLaurent { terms }
    }

    /// `v - v^{-1}`.
    pub fn v_minus_vinv() -> Self {
        let mut p = VLaurent::monomial(1, 1);
        p.add_term(-1, -1);
        p
    }

    /// `v^{-1} - v`.
    pub fn vinv_minus_v() -> Self {
        let mut p = VLaurent::monomial(-1, 1);
        p.add_term(1, -1);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        *self.terms.get(&exp).unwrap_or(&0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn add_term(&mut self, exp: i32, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(exp).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn add(&self, other: &VLaurent) -> VLaurent {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, other: &VLaurent) -> VLaurent {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, -c);
        }
        out
    }

    pub fn mul(&self, other: &VLaurent) -> VLaurent {
        let mut out = VLaurent::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    /// Bar involution `v -> v^{-1}`.
    pub fn bar(&self) -> VLaurent {
        let mut out = VLaurent::zero();
        for (e, c) in self.terms() {
            out.add_term(-e, c);
        }
        out
    }

}

/// An element of the Hecke algebra as a finite sum `sum_x  c_x H_x`,
/// with elements referenced by index into the oracle's element table.
type HeckeElement = BTreeMap<usize, VLaurent>;

/// Canonical-basis oracle over a symmetric group (finite) or affine
/// symmetric group truncated at a length bound.
pub struct BarOracle {
    m: usize,
    affine: bool,
    max_len: usize,
    /// All group elements of length at most `max_len`, sorted by
    /// `(length, window)`; for the finite group with a large enough
    /// bound this is the whole group.
    elements: Vec<AffinePermutation>,
    index: BTreeMap<AffinePermutation, usize>,
    lengths: Vec<usize>,
    /// `bar(H_y)` expanded in the standard basis, per element index.
    bar_rows: Vec<HeckeElement>,
    /// Canonical-basis coefficients: `canon[w][y] = h_{y,w}(v)`.
    canon: Vec<HeckeElement>,
}

impl BarOracle {
    /// Build the oracle, enumerating the group (or the affine ball of
    /// radius `max_len`) and running the full Gaussian elimination.
    pub fn new(m: usize, affine: bool, max_len: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidInput(
                "oracle needs rank at least 2".into(),
            ));
        }
        let gens: Vec<usize> = if affine { (0..m).collect() } else { (1..m).collect() };
        // Breadth-first enumeration by right multiplication.
        let mut elements = vec![AffinePermutation::identity(m)];
        let mut seen: BTreeMap<AffinePermutation, usize> = BTreeMap::new();
        seen.insert(elements[0].clone(), 0);
        let mut frontier = elements.clone();
        for _ in 1..=max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for &i in &gens {
                    let u = w.mul(&AffinePermutation::simple(i, m));
                    if u.length() > w.length() && !seen.contains_key(&u) {
                        seen.insert(u.clone(), 0);
                        next.push(u);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            elements.extend(next.iter().cloned());
            frontier = next;
        }
        elements.sort_by_key(|w| (w.length(), w.window().to_vec()));
        let index: BTreeMap<AffinePermutation, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let lengths: Vec<usize> = elements.iter().map(|w| w.length()).collect();
        let mut oracle = BarOracle {
            m,
            affine,
            max_len,
            elements,
            index,
            lengths,
            bar_rows: Vec::new(),
            canon: Vec::new(),
        };
        oracle.compute_bar_rows()?;
        oracle.compute_canonical()?;
        Ok(oracle)
    }

    pub fn elements(&self) -> &[AffinePermutation] {
        &self.elements
    }

    fn right_mul_gen(&self, elem: &HeckeElement, i: usize) -> Result<HeckeElement> {
        let s = AffinePermutation::simple(i, self.m);
        let mut out: HeckeElement = BTreeMap::new();
        for (&xi, c) in elem {
            let x = &self.elements[xi];
            let xs = x.mul(&s);
            let xsi = *self.index.get(&xs).ok_or_else(|| {
                Error::Internal(format!(
                    "element {xs} escaped the enumerated ball (bound {})",
                    self.max_len
                ))
            })?;
            // H_x H_s = H_{xs} if l(xs) > l(x), else
            // H_{xs} + (v^{-1} - v) H_x.
            let entry = out.entry(xsi).or_insert_with(VLaurent::zero);
            *entry = entry.add(c);
            if xs.length() < x.length() {
                let extra = c.mul(&VLaurent::vinv_minus_v());
                let e2 = out.entry(xi).or_insert_with(VLaurent::zero);
                *e2 = e2.add(&extra);
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    fn compute_bar_rows(&mut self) -> Result<()> {
        let mut rows = Vec::with_capacity(self.elements.len());
        for w in &self.elements {
            let word = w.reduced_word();
            // bar(H_w) = prod_i bar(H_{s_i}) with
            // bar(H_s) = H_s + (v - v^{-1}).
            let mut elem: HeckeElement = BTreeMap::new();
            elem.insert(0, VLaurent::one());
            debug_assert!(self.elements[0].is_identity());
            for &i in &word {
                let shifted = self.right_mul_gen(&elem, i)?;
                let mut next = shifted;
                for (&xi, c) in &elem {
                    let extra = c.mul(&VLaurent::v_minus_vinv());
                    let e = next.entry(xi).or_insert_with(VLaurent::zero);
                    *e = e.add(&extra);
                }
                next.retain(|_, c| !c.is_zero());
                elem = next;
            }
            rows.push(elem);
        }
        self.bar_rows = rows;
        Ok(())
    }

    /// Apply the bar involution to an arbitrary element.
    fn bar_element(&self, elem: &HeckeElement) -> HeckeElement {
        let mut out: HeckeElement = BTreeMap::new();
        for (&zi, c) in elem {
            let cbar = c.bar();
            for (&yi, r) in &self.bar_rows[zi] {
                let add = cbar.mul(r);
                let e = out.entry(yi).or_insert_with(VLaurent::zero);
                *e = e.add(&add);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    fn compute_canonical(&mut self) -> Result<()> {
        let n = self.elements.len();
        let mut canon: Vec<HeckeElement> = Vec::with_capacity(n);
        for wi in 0..n {
            // Solve h_y - bar(h_y) = sum_{z != y} R_{y,z} bar(h_z)
            // descending in y, with h_w = 1 and h_y in v Z[v].
            let mut h: HeckeElement = BTreeMap::new();
            h.insert(wi, VLaurent::one());
            // Indices with length strictly below l(w), descending.
            let mut below: Vec<usize> = (0..wi)
                .filter(|&yi| self.lengths[yi] < self.lengths[wi])
                .collect();
            below.sort_by_key(|&yi| std::cmp::Reverse((self.lengths[yi], yi)));
            for yi in below {
                // alpha = sum over already-solved z of R_{y,z} bar(h_z).
                let mut alpha = VLaurent::zero();
                for (&zi, hz) in &h {
                    if zi == yi {
                        continue;
                    }
                    if let Some(r) = self.bar_rows[zi].get(&yi) {
                        alpha = alpha.add(&r.mul(&hz.bar()));
                    }
                }
                if alpha.is_zero() {
                    continue;
                }
                // Need bar(alpha) = -alpha with no constant term; then
                // h_y = positive-exponent part of alpha.
                if alpha.coeff(0) != 0 || alpha.bar().add(&alpha) != VLaurent::zero() {
                    return Err(Error::Internal(format!(
                        "bar system inconsistent at element {}",
                        self.elements[yi]
                    )));
                }
                let mut hy = VLaurent::zero();
                for (e, c) in alpha.terms() {
                    if e >= 1 {
                        hy.add_term(e, c);
                    }
                }
                if !hy.is_zero() {
                    h.insert(yi, hy);
                }
            }
            // Verify bar invariance of the assembled element.
            let barred = self.bar_element(&h);
            if barred != h {
                return Err(Error::Internal(format!(
                    "canonical element for {} is not bar-invariant",
                    self.elements[wi]
                )));
            }
            canon.push(h);
        }
        self.canon = canon;
        Ok(())
    }

    /// The polynomial `P_{y,w}` as ascending `q`-coefficients (empty
    /// vector = zero). Errors if either element is outside the
    /// enumerated ball.
    pub fn kl_coeffs(&self, y: &AffinePermutation, w: &AffinePermutation) -> Result<Vec<i64>> {
        let yi = *self
            .index
            .get(y)
            .ok_or_else(|| Error::InvalidInput(format!("{y} not in oracle ball")))?;
        let wi = *self
            .index
            .get(w)
            .ok_or_else(|| Error::InvalidInput(format!("{w} not in oracle ball")))?;
        let gap = self.lengths[wi] as i64 - self.lengths[yi] as i64;
        let mut coeffs: Vec<i64> = Vec::new();
        if let Some(h) = self.canon[wi].get(&yi) {
            for (e, c) in h.terms() {
                let twice_k = gap - e as i64;
                if twice_k < 0 || twice_k % 2 != 0 {
                    return Err(Error::Internal(format!(
                        "coefficient v^{e} of h_{{{y},{w}}} violates the degree dictionary"
                    )));
                }
                let k = (twice_k / 2) as usize;
                if coeffs.len() <= k {
                    coeffs.resize(k + 1, 0);
                }
                coeffs[k] += c;
            }
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Ok(coeffs)
    }

    /// All nonzero `P_{y,w}` for `w` in the ball, keyed by window pairs.
    pub fn all_kl(&self) -> Result<BTreeMap<(Vec<i64>, Vec<i64>), Vec<i64>>> {
        let mut out = BTreeMap::new();
        for (wi, w) in self.elements.iter().enumerate() {
            for &yi in self.canon[wi].keys() {
                let y = &self.elements[yi];
                let coeffs = self.kl_coeffs(y, w)?;
                if !coeffs.is_empty() {
                    out.insert((y.window().to_vec(), w.window().to_vec()), coeffs);
                }
            }
        }
        Ok(out)
    }

    pub fn is_affine(&self) -> bool {
        self.affine
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_arithmetic() {
        let a = VLaurent::v_minus_vinv();
        assert_eq!(a.bar(), VLaurent::vinv_minus_v());
        let sq = a.mul(&a);
        // (v - v^{-1})^2 = v^2 - 2 + v^{-2}.
        assert_eq!(sq.coeff(2), 1);
        assert_eq!(sq.coeff(0), -2);
        assert_eq!(sq.coeff(-2), 1);
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn rank_two_canonical_basis() {
        let oracle = BarOracle::new(2, false, 10).unwrap();
        assert_eq!(oracle.elements().len(), 2);
        let e = AffinePermutation::identity(2);
        let s = AffinePermutation::simple(1, 2);
        assert_eq!(oracle.kl_coeffs(&e, &s).unwrap(), vec![1]);
        assert_eq!(oracle.kl_coeffs(&s, &s).unwrap(), vec![1]);
        assert_eq!(oracle.kl_coeffs(&s, &e).unwrap(), Vec::<i64>::new());
    }

    #[test]
    fn symmetric_group_three_all_trivial() {
        let oracle = BarOracle::new(3, false, 10).unwrap();
        assert_eq!(oracle.elements().len(), 6);
        for w in oracle.elements() {
            for y in oracle.elements() {
                let coeffs = oracle.kl_coeffs(y, w).unwrap();
                if !coeffs.is_empty() {
                    assert_eq!(coeffs, vec![1], "P_{{{y},{w}}}");
                }
            }
        }
    }

    #[test]
    fn symmetric_group_four_known_nontrivial_pair() {
        let oracle = BarOracle::new(4, false, 10).unwrap();
        assert_eq!(oracle.elements().len(), 24);
        let y = AffinePermutation::new(vec![1, 3, 2, 4]).unwrap();
        let w = AffinePermutation::new(vec![3, 4, 1, 2]).unwrap();
        assert_eq!(oracle.kl_coeffs(&y, &w).unwrap(), vec![1, 1]); // 1 + q
        // The other classical nontrivial pair in S_4: y = s_1 s_3 = 2143.
        let y2 = AffinePermutation::new(vec![2, 1, 4, 3]).unwrap();
        let w2 = AffinePermutation::new(vec![3, 4, 1, 2]).unwrap();
        assert_eq!(oracle.kl_coeffs(&y2, &w2).unwrap(), vec![1]);
        // 4231 over 2143 is the other 1 + q pair.
        let w3 = AffinePermutation::new(vec![4, 2, 3, 1]).unwrap();
        assert_eq!(oracle.kl_coeffs(&y2, &w3).unwrap(), vec![1, 1]);
    }

    #[test]
    fn affine_rank_two_ball() {
        let oracle = BarOracle::new(2, true, 8).unwrap();
        // Lengths 0..8 with two elements per positive length: 1 + 2*8.
        assert_eq!(oracle.elements().len(), 17);
        // Every P on a comparable pair is 1 in the infinite dihedral
        // group, a classical fact the elimination must reproduce.
        for w in oracle.elements() {
            for y in oracle.elements() {
                let coeffs = oracle.kl_coeffs(y, w).unwrap();
                if !coeffs.is_empty() {
                    assert_eq!(coeffs, vec![1], "P_{{{y},{w}}}");
                }
            }
        }
    }

    #[test]
    fn canonical_coefficients_are_nonnegative() {
        let oracle = BarOracle::new(4, false, 10).unwrap();
        for map in oracle.all_kl().unwrap().values() {
            assert!(map.iter().all(|&c| c >= 0));
        }
    }
}
