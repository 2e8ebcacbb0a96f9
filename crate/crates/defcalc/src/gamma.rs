//! Synthesis of the bilinear current kernels Γ, Γ̂, Γ̃, Γ̂̃.
//!
//! For an admissible operator the kernel solving
//! Σ_μ (-∂†← + ∂)∘Γ_μ = Λ(∂) - Λ(∂†←) has one term per (coefficient word,
//! index position): the letters left of the position become left-acting
//! conjugated derivatives, the letters right of it stay as plain derivatives,
//! and the coefficient is dressed by ζ⁻ along the component axis and every
//! left letter. The hatted kernel additionally applies ζ⁻ to the left
//! argument, which is what makes Σ_μ ∂^μ (f Γ̂_μ g) close into a divergence.
//! The Λ̃(∂†) part mirrors everything with ∂ ↔ ∂† and ζ ↔ ζ⁻.
//!
//! Two independent routes build the same kernel: the closed form above and a
//! top-down coefficient recursion that solves the defining operator equation
//! order by order. Their termwise agreement is a correctness oracle, and the
//! recursion reports which of its equations fails when a spec only looks
//! admissible.

use crate::calculus::Deriv;
use crate::equation::{EquationSpec, Part, Word};
use crate::error::{CalcError, Result};
use crate::field::LatticeField;
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// One sandwich term ⟨left word | ζ insertion | coefficient | right word⟩.
#[derive(Clone)]
pub struct GammaTerm<S: Scalar> {
    /// Derivatives applied to the left argument, in application order.
    pub left: Vec<(usize, Deriv)>,
    /// ζ^power applied to the left argument after the derivatives (hatted
    /// kernels only).
    pub left_zeta: Option<(usize, i64)>,
    /// ζ applications baked into the coefficient, recorded as (axis, power).
    pub zeta_insertions: Vec<(usize, i64)>,
    /// Dressed coefficient field.
    pub coeff: LatticeField<S>,
    /// Derivatives applied to the right argument; the last entry acts first.
    pub right: Vec<(usize, Deriv)>,
}

/// Current kernel for one axis component.
#[derive(Clone)]
pub struct GammaOperator<S: Scalar> {
    pub axis: usize,
    pub part: Part,
    pub hatted: bool,
    pub terms: Vec<GammaTerm<S>>,
}

impl<S: Scalar> GammaOperator<S> {
    /// Evaluate f Γ_μ g as a field.
    pub fn sandwich(&self, f: &LatticeField<S>, g: &LatticeField<S>) -> Result<LatticeField<S>> {
        f.same_shape(g)?;
        if f.dim() != self.terms.first().map(|t| t.coeff.dim()).unwrap_or(f.dim()) {
            return Err(CalcError::DimensionMismatch(
                "field dimension differs from kernel coefficients".into(),
            ));
        }
        let grid = f.grid().clone();
        let dim = f.dim();
        let mut acc = LatticeField::zeros(grid, dim);
        for term in &self.terms {
            let mut lf = f.clone();
            for &(ax, d) in &term.left {
                lf = lf.apply_deriv(ax, d)?;
            }
            if let Some((ax, pow)) = term.left_zeta {
                lf = lf.zeta_pow(ax, pow)?;
            }
            let mut rg = g.clone();
            for &(ax, d) in term.right.iter().rev() {
                rg = rg.apply_deriv(ax, d)?;
            }
            acc = acc.add(&lf.mul(&term.coeff)?.mul(&rg)?)?;
        }
        Ok(acc)
    }

    /// Total derivative order of the deepest term plus dressing reach; sites
    /// farther than this from a zero-padded edge see only true values.
    pub fn stencil_margin(&self) -> usize {
        self.terms
            .iter()
            .map(|t| t.left.len() + t.right.len() + t.zeta_insertions.len() + 2)
            .max()
            .unwrap_or(1)
    }
}

fn require_part_admissible<S: Scalar>(
    eq: &EquationSpec<S>,
    part: Part,
    tol: f64,
) -> Result<()> {
    let report = eq.check_condition(tol)?;
    if !report.part_admissible(part) {
        return Err(CalcError::Inadmissible { worst: report.part_worst(part), tol });
    }
    Ok(())
}

fn build_part<S: Scalar>(
    eq: &EquationSpec<S>,
    part: Part,
    hatted: bool,
    tol: f64,
) -> Result<Vec<GammaOperator<S>>> {
    require_part_admissible(eq, part, tol)?;
    let zpow = part.zeta_power();
    let left_deriv = part.deriv().flip();
    let right_deriv = part.deriv();
    let naxes = eq.grid().naxes();
    let mut out = Vec::with_capacity(naxes);
    for mu in 0..naxes {
        let mut terms = Vec::new();
        for (word, coeff) in eq.part(part) {
            for p in 0..word.len() {
                if word[p] != mu {
                    continue;
                }
                let mut dressed = coeff.zeta_pow(mu, zpow)?;
                let mut insertions = vec![(mu, zpow)];
                for &ax in &word[..p] {
                    dressed = dressed.zeta_pow(ax, zpow)?;
                    insertions.push((ax, zpow));
                }
                terms.push(GammaTerm {
                    left: word[..p].iter().map(|&ax| (ax, left_deriv)).collect(),
                    left_zeta: if hatted { Some((mu, zpow)) } else { None },
                    zeta_insertions: insertions,
                    coeff: dressed,
                    right: word[p + 1..].iter().map(|&ax| (ax, right_deriv)).collect(),
                });
            }
        }
        out.push(GammaOperator { axis: mu, part, hatted, terms });
    }
    Ok(out)
}

/// Closed-form Γ kernels for the ∂ part, one per axis.
pub fn build_gamma<S: Scalar>(eq: &EquationSpec<S>, tol: f64) -> Result<Vec<GammaOperator<S>>> {
    build_part(eq, Part::Lambda, false, tol)
}

/// ζ⁻-hatted kernels Γ̂ whose sandwich gives the conserved current.
pub fn build_gamma_hat<S: Scalar>(eq: &EquationSpec<S>, tol: f64) -> Result<Vec<GammaOperator<S>>> {
    build_part(eq, Part::Lambda, true, tol)
}

/// Mirror kernels Γ̃ for the ∂† part.
pub fn build_gamma_tilde<S: Scalar>(eq: &EquationSpec<S>, tol: f64) -> Result<Vec<GammaOperator<S>>> {
    build_part(eq, Part::LambdaTilde, false, tol)
}

/// ζ-hatted mirror kernels Γ̂̃.
pub fn build_gamma_hat_tilde<S: Scalar>(
    eq: &EquationSpec<S>,
    tol: f64,
) -> Result<Vec<GammaOperator<S>>> {
    build_part(eq, Part::LambdaTilde, true, tol)
}

/// Left-acting conjugated equation: Φ′ ↦ Φ′[Λ(∂†←) + Λ̃(∂←)] with dressed
/// coefficients, potential carried over unchanged.
#[derive(Clone)]
pub struct ConjugateSpec<S: Scalar> {
    /// (derivative applied to Φ′, word, dressed coefficient) per term.
    terms: Vec<(Deriv, Word, LatticeField<S>)>,
    pub potential: crate::equation::Potential,
    grid: std::sync::Arc<crate::grid::CalculusSpec>,
    dim: usize,
}

impl<S: Scalar> ConjugateSpec<S> {
    /// Evaluate Φ′[Λ(∂†←) + Λ̃(∂←)] (derivative words only).
    pub fn apply_left(&self, f: &LatticeField<S>) -> Result<LatticeField<S>> {
        let mut acc = LatticeField::zeros(self.grid.clone(), self.dim);
        for (deriv, word, coeff) in &self.terms {
            let mut df = f.clone();
            for &ax in word.iter() {
                df = df.apply_deriv(ax, *deriv)?;
            }
            acc = acc.add(&df.mul(coeff)?)?;
        }
        Ok(acc)
    }

    pub fn terms(&self) -> &[(Deriv, Word, LatticeField<S>)] {
        &self.terms
    }
}

/// Build the conjugated equation spec (coefficients ζ-dressed per part).
pub fn build_conjugate<S: Scalar>(eq: &EquationSpec<S>) -> Result<ConjugateSpec<S>> {
    let mut terms = Vec::new();
    for part in [Part::Lambda, Part::LambdaTilde] {
        let deriv = part.deriv().flip();
        let zpow = part.zeta_power();
        for (word, coeff) in eq.part(part) {
            let mut dressed = coeff.clone();
            for &ax in word.iter() {
                dressed = dressed.zeta_pow(ax, zpow)?;
            }
            terms.push((deriv, word.clone(), dressed));
        }
    }
    Ok(ConjugateSpec {
        terms,
        potential: eq.potential.clone(),
        grid: eq.grid().clone(),
        dim: eq.dim(),
    })
}

/// Pointwise residual of the defining bilinear identity
/// Σ_μ ∂^μ (f Γ̂_μ g) + Σ_μ ∂†^μ (f Γ̂̃_μ g)
///   = f [Λ(∂) + Λ̃(∂†)] g - [f Λ(∂†←) + f Λ̃(∂←)] g
/// for arbitrary fields f, g. This is the off-shell test of correct
/// synthesis; on-shell it implies the conservation laws without assuming
/// them.
pub fn bilinear_residual<S: Scalar>(
    eq: &EquationSpec<S>,
    f: &LatticeField<S>,
    g: &LatticeField<S>,
    tol: f64,
) -> Result<LatticeField<S>> {
    f.same_shape(g)?;
    let mut lhs = LatticeField::zeros(f.grid().clone(), f.dim());
    if !eq.lambda.is_empty() {
        for gam in build_gamma_hat(eq, tol)? {
            let flux = gam.sandwich(f, g)?;
            lhs = lhs.add(&flux.diff(gam.axis)?)?;
        }
    }
    if !eq.lambda_tilde.is_empty() {
        for gam in build_gamma_hat_tilde(eq, tol)? {
            let flux = gam.sandwich(f, g)?;
            lhs = lhs.add(&flux.conj_diff(gam.axis)?)?;
        }
    }
    let conj = build_conjugate(eq)?;
    let rhs = f.mul(&eq.apply(g)?)?.sub(&conj.apply_left(f)?.mul(g)?)?;
    lhs.sub(&rhs)
}

/// Level-k recursion coefficients keyed by (component axis, left word,
/// right word).
type LevelMap<S> = BTreeMap<(usize, Word, Word), LatticeField<S>>;

/// Build the ∂-part kernels by solving the coefficient equations of the
/// defining operator identity top-down (highest order first, invert ζ,
/// substitute downward), then verify the leftover constraint equations.
/// Must agree termwise with [`build_gamma`] on every admissible spec.
pub fn build_gamma_by_recursion<S: Scalar>(
    eq: &EquationSpec<S>,
    tol: f64,
) -> Result<Vec<GammaOperator<S>>> {
    build_by_recursion_part(eq, Part::Lambda, tol)
}

/// Mirror recursion for the ∂† part.
pub fn build_gamma_tilde_by_recursion<S: Scalar>(
    eq: &EquationSpec<S>,
    tol: f64,
) -> Result<Vec<GammaOperator<S>>> {
    build_by_recursion_part(eq, Part::LambdaTilde, tol)
}

fn all_words(naxes: usize, len: usize) -> Vec<Word> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for w in all_words(naxes, len - 1) {
        for ax in 0..naxes {
            let mut v = w.clone();
            v.push(ax);
            out.push(v);
        }
    }
    out
}

fn build_by_recursion_part<S: Scalar>(
    eq: &EquationSpec<S>,
    part: Part,
    tol: f64,
) -> Result<Vec<GammaOperator<S>>> {
    require_part_admissible(eq, part, tol)?;
    let grid = eq.grid().clone();
    let dim = eq.dim();
    let naxes = grid.naxes();
    let order = eq.order(part);
    let zpow = part.zeta_power();
    // In the mirrored part the roles swap: the coefficient equations use ∂†
    // where the plain part uses ∂, and ζ acts as the inverse transformation.
    let solve_deriv = part.deriv();
    let coeffs = eq.part(part);
    let zero = LatticeField::zeros(grid.clone(), dim);
    let lam = |w: &Word| coeffs.get(w).cloned().unwrap_or_else(|| zero.clone());

    // Level 0: a⁰ keyed by full word (component = word[0], right = word[1..]).
    // a⁰_w = ζ∓_{w0} [Λ_w - Σ_a ∂^a a⁰_{a·w}], solved top-down in word length.
    let mut level0: BTreeMap<Word, LatticeField<S>> = BTreeMap::new();
    for len in (1..=order).rev() {
        for w in all_words(naxes, len) {
            let mut rhs = lam(&w);
            for a in 0..naxes {
                let mut aw = vec![a];
                aw.extend_from_slice(&w);
                if let Some(higher) = level0.get(&aw) {
                    rhs = rhs.sub(&higher.apply_deriv(a, solve_deriv)?)?;
                }
            }
            level0.insert(w.clone(), rhs.zeta_pow(w[0], zpow)?);
        }
    }

    // Constraint (eq0): Σ_μ ∂^μ a⁰_μ = 0.
    let mut eq0 = LatticeField::zeros(grid.clone(), dim);
    for a in 0..naxes {
        if let Some(c) = level0.get(&vec![a]) {
            eq0 = eq0.add(&c.apply_deriv(a, solve_deriv)?)?;
        }
    }
    let margin = order + 2;
    let r0 = eq0.interior_max_norm(margin);
    if r0 > tol {
        return Err(CalcError::SynthesisFailure { equation: "eq0".into(), residual: r0 });
    }

    // Reorganize level 0 into the keyed form and iterate levels upward.
    let mut levels: Vec<LevelMap<S>> = Vec::new();
    let mut lv0: LevelMap<S> = BTreeMap::new();
    for (w, c) in &level0 {
        lv0.insert((w[0], Vec::new(), w[1..].to_vec()), c.clone());
    }
    levels.push(lv0);

    for k in 0..order.saturating_sub(1) {
        // Solve a^{k+1}_{c,W,R} = ζ∓_c [a^k_{W_k, W_{:k}, c·R} - Σ_a ∂^a a^{k+1}_{a,W,c·R}]
        // descending in total order T = 1 + |W| + |R|.
        let mut next: LevelMap<S> = BTreeMap::new();
        let wlen = k + 1;
        for total in (wlen + 1..=order).rev() {
            let rlen = total - 1 - wlen;
            for bigw in all_words(naxes, wlen) {
                for r in all_words(naxes, rlen) {
                    for c in 0..naxes {
                        let mut cr = vec![c];
                        cr.extend_from_slice(&r);
                        let prev_key = (bigw[wlen - 1], bigw[..wlen - 1].to_vec(), cr.clone());
                        let mut rhs = levels[k].get(&prev_key).cloned().unwrap_or_else(|| zero.clone());
                        for a in 0..naxes {
                            let key = (a, bigw.clone(), cr.clone());
                            if let Some(higher) = next.get(&key) {
                                rhs = rhs.sub(&higher.apply_deriv(a, solve_deriv)?)?;
                            }
                        }
                        next.insert((c, bigw.clone(), r.clone()), rhs.zeta_pow(c, zpow)?);
                    }
                }
            }
        }
        levels.push(next);
    }

    // Constraint family (eq5): for every pure-left word W,
    // a^{|W|-1}_{W_last, W_init, ∅} - Σ_a ∂^a a^{|W|}_{a, W, ∅} = dressed Λ_W.
    for wlen in 1..=order {
        let k = wlen - 1;
        for bigw in all_words(naxes, wlen) {
            let key = (bigw[wlen - 1], bigw[..wlen - 1].to_vec(), Vec::new());
            let mut lhs = levels[k].get(&key).cloned().unwrap_or_else(|| zero.clone());
            if let Some(next) = levels.get(k + 1) {
                for a in 0..naxes {
                    if let Some(c) = next.get(&(a, bigw.clone(), Vec::new())) {
                        lhs = lhs.sub(&c.apply_deriv(a, solve_deriv)?)?;
                    }
                }
            }
            let mut dressed = lam(&bigw);
            for &ax in bigw.iter() {
                dressed = dressed.zeta_pow(ax, zpow)?;
            }
            let res = lhs.sub(&dressed)?.interior_max_norm(margin);
            if res > tol {
                return Err(CalcError::SynthesisFailure { equation: "eq5".into(), residual: res });
            }
        }
    }

    // Assemble per-axis kernels from the recursion coefficients.
    let left_deriv = part.deriv().flip();
    let right_deriv = part.deriv();
    let mut out = Vec::with_capacity(naxes);
    for mu in 0..naxes {
        let mut terms = Vec::new();
        for (k, level) in levels.iter().enumerate() {
            for ((c, bigw, r), coeff) in level {
                if *c != mu || bigw.len() != k {
                    continue;
                }
                if coeff.max_norm() == 0.0 {
                    continue;
                }
                terms.push(GammaTerm {
                    left: bigw.iter().map(|&ax| (ax, left_deriv)).collect(),
                    left_zeta: None,
                    zeta_insertions: Vec::new(),
                    coeff: coeff.clone(),
                    right: r.iter().map(|&ax| (ax, right_deriv)).collect(),
                });
            }
        }
        out.push(GammaOperator { axis: mu, part, hatted: false, terms });
    }
    Ok(out)
}

/// Largest termwise coefficient difference between two kernel sets on
/// interior sites, matching terms by (left word, right word). Missing terms
/// compare against zero. `margin` keeps zero-padded edges (where the
/// recursion's truncated shifts differ harmlessly) out of the comparison.
pub fn termwise_difference<S: Scalar>(
    a: &[GammaOperator<S>],
    b: &[GammaOperator<S>],
    margin: usize,
) -> f64 {
    let mut worst = 0.0f64;
    for (ga, gb) in a.iter().zip(b.iter()) {
        let key = |t: &GammaTerm<S>| (t.left.clone(), t.right.clone());
        let mut map_a: BTreeMap<_, LatticeField<S>> = BTreeMap::new();
        for t in &ga.terms {
            let k = key(t);
            let entry = map_a.remove(&k).map(|e| e.add(&t.coeff).unwrap()).unwrap_or_else(|| t.coeff.clone());
            map_a.insert(k, entry);
        }
        let mut map_b: BTreeMap<_, LatticeField<S>> = BTreeMap::new();
        for t in &gb.terms {
            let k = key(t);
            let entry = map_b.remove(&k).map(|e| e.add(&t.coeff).unwrap()).unwrap_or_else(|| t.coeff.clone());
            map_b.insert(k, entry);
        }
        let keys: std::collections::BTreeSet<_> =
            map_a.keys().chain(map_b.keys()).cloned().collect();
        for k in keys {
            let diff = match (map_a.get(&k), map_b.get(&k)) {
                (Some(x), Some(y)) => x.sub(y).unwrap().interior_max_norm(margin),
                (Some(x), None) => x.interior_max_norm(margin),
                (None, Some(y)) => y.interior_max_norm(margin),
                (None, None) => 0.0,
            };
            worst = worst.max(diff);
        }
    }
    worst
}

impl std::fmt::Debug for GammaTerm<f64> {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let word = |w: &[(usize, Deriv)]| -> String {
            w.iter()
                .map(|(ax, d)| match d {
                    Deriv::Plain => format!("d{ax}"),
                    Deriv::Conjugated => format!("d†{ax}"),
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(
            fm,
            "<{} | z{:?} | coeff(|max|={:.3e}) | {}>",
            word(&self.left),
            self.left_zeta,
            self.coeff.max_norm(),
            word(&self.right)
        )
    }
}
