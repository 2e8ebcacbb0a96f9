//! The q-plane differential calculus: derivatives, transformation operators,
//! the second-order variable-coefficient equation, and its exact
//! verification.
//!
//! Generator actions are derived from the R-matrix transformation table
//! extended multiplicatively, with one correction: consistency of the
//! deformed Leibniz rule with yx = qxy and ∂y∂x = q⁻¹∂x∂y forces the nonzero
//! off-diagonal component onto ζ⁻ʸ_x (acting as y ↦ (q⁻²-1)x) rather than
//! its transpose. With that table every displayed identity of the model —
//! the admissibility of φ(y), ψ(x), the kernel components, the conjugated
//! operator — comes out exactly as printed.
//!
//! Everything here is exact in ℚ(q); no numeric q ever enters a check.

use super::poly::QPoly;
use super::qrat::QRat;
use crate::error::{CalcError, Result};

/// Generator index on the plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axis2 {
    X,
    Y,
}

use Axis2::{X, Y};

const AXES: [Axis2; 2] = [X, Y];

/// q-integer [n]_{q²} = 1 + q² + … + q^{2(n-1)}.
fn qint2(n: u32) -> QRat {
    let mut acc = QRat::zero();
    for i in 0..n {
        acc = acc.add(&QRat::q_pow(2 * i as i64));
    }
    acc
}

/// ∂x(x^a y^b) = [a]_{q²} x^{a-1} y^b, ∂y(x^a y^b) = q^a [b]_{q²} x^a y^{b-1}.
/// Derived from the transformation table through the deformed Leibniz rule;
/// the relation ∂y∂x = q⁻¹ ∂x∂y holds for them identically.
pub fn qderiv(p: &QPoly, axis: Axis2) -> QPoly {
    let mut out = QPoly::zero();
    for ((a, b), c) in p.terms() {
        match axis {
            X => {
                if *a > 0 {
                    out = out.add(&QPoly::monomial(a - 1, *b, c.mul(&qint2(*a))));
                }
            }
            Y => {
                if *b > 0 {
                    let f = c.mul(&QRat::q_pow(*a as i64)).mul(&qint2(*b));
                    out = out.add(&QPoly::monomial(*a, b - 1, f));
                }
            }
        }
    }
    out
}

/// Generator image ζ⁻ⁱ_j(g) for g ∈ {x, y}; `upper` = i, `lower` = j.
fn zeta_minus_generator(upper: Axis2, lower: Axis2, gen: Axis2) -> QPoly {
    match (upper, lower, gen) {
        (X, X, X) => QPoly::monomial(1, 0, QRat::q_pow(-2)),
        (X, X, Y) => QPoly::monomial(0, 1, QRat::q_pow(-1)),
        (Y, Y, Y) => QPoly::monomial(0, 1, QRat::q_pow(-2)),
        (Y, Y, X) => QPoly::monomial(1, 0, QRat::q_pow(-1)),
        // magnitude q⁻²(q⁻²-1) is forced by ζᵏ_j ζ⁻ⁱ_k = δⁱ_j against the
        // Leibniz-consistent ζ below
        (Y, X, Y) => QPoly::monomial(1, 0, QRat::q_pow(-2).mul(&QRat::q_pow(-2).sub(&QRat::one()))),
        (Y, X, X) => QPoly::zero(),
        (X, Y, _) => QPoly::zero(),
    }
}

/// Generator image ζⁱ_j(g): inverse of the table above; the off-diagonal
/// (q²-1) entry is what consistency of the Leibniz rule with yx = qxy forces.
fn zeta_plus_generator(upper: Axis2, lower: Axis2, gen: Axis2) -> QPoly {
    match (upper, lower, gen) {
        (X, X, X) => QPoly::monomial(1, 0, QRat::q_pow(2)),
        (X, X, Y) => QPoly::monomial(0, 1, QRat::q_pow(1)),
        (Y, Y, Y) => QPoly::monomial(0, 1, QRat::q_pow(2)),
        (Y, Y, X) => QPoly::monomial(1, 0, QRat::q_pow(1)),
        (Y, X, Y) => QPoly::monomial(1, 0, QRat::q_pow(2).sub(&QRat::one())),
        (Y, X, X) => QPoly::zero(),
        (X, Y, _) => QPoly::zero(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZetaDir {
    Plus,
    Minus,
}

/// Full transformation component ζ^{±,i}_j on a polynomial, extended from
/// generators by the multiplicativity rule of the matrix comultiplication:
/// ζ⁻ⁱ_j(fg) = Σ_k (ζ⁻ᵏ_j f)(ζ⁻ⁱ_k g) and ζⁱ_j(fg) = Σ_k (ζⁱ_k f)(ζᵏ_j g).
pub fn zeta_component(p: &QPoly, dir: ZetaDir, upper: Axis2, lower: Axis2) -> QPoly {
    let mut out = QPoly::zero();
    for ((a, b), c) in p.terms() {
        let m = zeta_monomial(dir, *a, *b);
        let entry = match (lower, upper) {
            (X, X) => &m[0],
            (X, Y) => &m[1],
            (Y, X) => &m[2],
            (Y, Y) => &m[3],
        };
        out = out.add(&entry.scale(c));
    }
    out
}

/// All four components of ζ^± on the monomial x^a y^b, as
/// [ (j=X,i=X), (j=X,i=Y), (j=Y,i=X), (j=Y,i=Y) ].
fn zeta_monomial(dir: ZetaDir, a: u32, b: u32) -> [QPoly; 4] {
    // state M[j][i] = component of the processed prefix; identity for the
    // empty product (ζ^i_j(1) = δ^i_j)
    let mut m = [QPoly::one(), QPoly::zero(), QPoly::zero(), QPoly::one()];
    let gen_table = |g: Axis2| -> [QPoly; 4] {
        let f = match dir {
            ZetaDir::Minus => zeta_minus_generator,
            ZetaDir::Plus => zeta_plus_generator,
        };
        [f(X, X, g), f(Y, X, g), f(X, Y, g), f(Y, Y, g)]
    };
    let absorb = |g: Axis2, m: &mut [QPoly; 4]| {
        let t = gen_table(g);
        let idx = |j: usize, i: usize| j * 2 + i;
        let mut next = [QPoly::zero(), QPoly::zero(), QPoly::zero(), QPoly::zero()];
        for j in [0usize, 1] {
            for i in [0usize, 1] {
                let mut acc = QPoly::zero();
                for k in [0usize, 1] {
                    let (f_part, g_part) = match dir {
                        // ζ⁻ⁱ_j(fg) = Σ_k (ζ⁻ᵏ_j f)(ζ⁻ⁱ_k g)
                        ZetaDir::Minus => (&m[idx(j, k)], &t[idx(k, i)]),
                        // ζⁱ_j(fg) = Σ_k (ζⁱ_k f)(ζᵏ_j g)
                        ZetaDir::Plus => (&m[idx(k, i)], &t[idx(j, k)]),
                    };
                    acc = acc.add(&f_part.qmul(g_part));
                }
                next[idx(j, i)] = acc;
            }
        }
        *m = next;
    };
    for _ in 0..a {
        absorb(X, &mut m);
    }
    for _ in 0..b {
        absorb(Y, &mut m);
    }
    m
}

/// Conjugated derivative ∂†ⁱ = -Σ_j ∂^j ∘ ζ⁻ⁱ_j.
pub fn conj_qderiv(p: &QPoly, axis: Axis2) -> QPoly {
    let mut out = QPoly::zero();
    for j in AXES {
        let transformed = zeta_component(p, ZetaDir::Minus, axis, j);
        out = out.add(&qderiv(&transformed, j));
    }
    out.neg()
}

/// The second-order operator Λ = φ(y) ∂x∂x + ψ(x) ∂y∂y.
#[derive(Clone)]
pub struct QPlaneEquation {
    pub phi: QPoly,
    pub psi: QPoly,
}

impl QPlaneEquation {
    pub fn new(phi: QPoly, psi: QPoly) -> Result<Self> {
        if !phi.depends_only_on_y() {
            return Err(CalcError::Config("phi must depend only on y".into()));
        }
        if !psi.depends_only_on_x() {
            return Err(CalcError::Config("psi must depend only on x".into()));
        }
        Ok(QPlaneEquation { phi, psi })
    }

    /// Λ(∂)Φ = φ(y)∂x∂xΦ + ψ(x)∂y∂yΦ.
    pub fn apply(&self, p: &QPoly) -> QPoly {
        let dxx = qderiv(&qderiv(p, X), X);
        let dyy = qderiv(&qderiv(p, Y), Y);
        self.phi.qmul(&dxx).add(&self.psi.qmul(&dyy))
    }

    /// Conjugated-equation coefficients: the ζ⁻-dressed words of Λ(∂†←).
    /// For the diagonal operator these come out as φ(q⁻²y) and ψ(q⁻²x).
    fn conj_coeff(&self, word: [Axis2; 2]) -> QPoly {
        // Σ_{α1,α2} ζ⁻^{α2}_{w2}( ζ⁻^{α1}_{w1}( Λ_{α1 α2} ) )
        let mut acc = QPoly::zero();
        for a1 in AXES {
            for a2 in AXES {
                let lam = self.coefficient(a1, a2);
                if lam.is_zero() {
                    continue;
                }
                let inner = zeta_component(&lam, ZetaDir::Minus, a1, word[0]);
                let outer = zeta_component(&inner, ZetaDir::Minus, a2, word[1]);
                acc = acc.add(&outer);
            }
        }
        acc
    }

    fn coefficient(&self, i: Axis2, j: Axis2) -> QPoly {
        match (i, j) {
            (X, X) => self.phi.clone(),
            (Y, Y) => self.psi.clone(),
            _ => QPoly::zero(),
        }
    }

    /// Φ′ Λ(∂†←): left-acting conjugated operator.
    pub fn apply_conjugate(&self, p: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for w in [[X, X], [Y, Y], [X, Y], [Y, X]] {
            let coeff = self.conj_coeff(w);
            if coeff.is_zero() {
                continue;
            }
            let df = conj_qderiv(&conj_qderiv(p, w[0]), w[1]);
            acc = acc.add(&df.qmul(&coeff));
        }
        acc
    }

    /// Admissibility residuals Σ_α ∂†^α Λ_{α ν} for ν = x, y. Both vanish
    /// exactly for φ(y), ψ(x).
    pub fn condition_residuals(&self) -> [QPoly; 2] {
        let mut out = [QPoly::zero(), QPoly::zero()];
        for (slot, nu) in AXES.iter().enumerate() {
            let mut acc = QPoly::zero();
            for alpha in AXES {
                let lam = self.coefficient(alpha, *nu);
                if !lam.is_zero() {
                    acc = acc.add(&conj_qderiv(&lam, alpha));
                }
            }
            out[slot] = acc;
        }
        out
    }

    /// Terms of Γ_μ / Γ̂_μ: (left ∂†-word, optional left ζ⁻ insertion
    /// (upper, lower), coefficient, right ∂-word).
    pub fn gamma_terms(&self, mu: Axis2, hatted: bool) -> Vec<QGammaTerm> {
        let mut terms = Vec::new();
        // component contraction index j: for the plain Γ only j = μ survives
        // conceptually (no insertion recorded); for Γ̂ the ζ⁻←^j_μ insertion
        // pairs each j-branch with the j-component coefficient.
        let uppers: Vec<Axis2> = if hatted { AXES.to_vec() } else { vec![mu] };
        for j in uppers {
            // position 0: coeff = Σ_α ζ⁻^α_j Λ_{α ν}, right word [ν]
            for nu in AXES {
                let mut coeff = QPoly::zero();
                for alpha in AXES {
                    let lam = self.coefficient(alpha, nu);
                    if !lam.is_zero() {
                        coeff = coeff.add(&zeta_component(&lam, ZetaDir::Minus, alpha, j));
                    }
                }
                if !coeff.is_zero() {
                    terms.push(QGammaTerm {
                        left: vec![],
                        left_zeta: if hatted { Some((j, mu)) } else { None },
                        coeff,
                        right: vec![nu],
                    });
                }
            }
            // position 1: coeff = Σ_{α,α1} ζ⁻^α_j ζ⁻^{α1}_{μ1} Λ_{α1 α},
            // left word [μ1]
            for mu1 in AXES {
                let mut coeff = QPoly::zero();
                for alpha in AXES {
                    for a1 in AXES {
                        let lam = self.coefficient(a1, alpha);
                        if lam.is_zero() {
                            continue;
                        }
                        let inner = zeta_component(&lam, ZetaDir::Minus, a1, mu1);
                        let outer = zeta_component(&inner, ZetaDir::Minus, alpha, j);
                        coeff = coeff.add(&outer);
                    }
                }
                if !coeff.is_zero() {
                    terms.push(QGammaTerm {
                        left: vec![mu1],
                        left_zeta: if hatted { Some((j, mu)) } else { None },
                        coeff,
                        right: vec![],
                    });
                }
            }
        }
        terms
    }

    /// f Γ̂_μ g (or f Γ_μ g when `hatted` is false).
    pub fn sandwich(&self, mu: Axis2, hatted: bool, f: &QPoly, g: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for term in self.gamma_terms(mu, hatted) {
            acc = acc.add(&term.eval(f, g));
        }
        acc
    }

    /// Residual of the defining operator identity evaluated on (f, g):
    /// Σ_μ [ f(-∂†←^μ + ∂^μ)∘Γ_μ g ] - f·Λ(∂)g + (fΛ(∂†←))·g.
    pub fn gamma_identity_residual(&self, f: &QPoly, g: &QPoly) -> QPoly {
        let mut lhs = QPoly::zero();
        for mu in AXES {
            for term in self.gamma_terms(mu, false) {
                // -∂†←^μ appends μ to the left word
                let mut extended = term.clone();
                extended.left.push(mu);
                lhs = lhs.sub(&extended.eval(f, g));
                // +∂^μ acts on the whole coefficient-and-right-word product
                let mut lf = f.clone();
                for &ax in &term.left {
                    lf = conj_qderiv(&lf, ax);
                }
                let mut rg = g.clone();
                for &ax in term.right.iter().rev() {
                    rg = qderiv(&rg, ax);
                }
                let middle = qderiv(&term.coeff.qmul(&rg), mu);
                lhs = lhs.add(&lf.qmul(&middle));
            }
        }
        let rhs = f.qmul(&self.apply(g)).sub(&self.apply_conjugate(f).qmul(g));
        lhs.sub(&rhs)
    }

    /// Divergence ∂x(Φ′Γ̂_xΦ) + ∂y(Φ′Γ̂_yΦ); zero exactly when Φ and Φ′
    /// solve the equation and its conjugate.
    pub fn current_divergence(&self, phi_prime: &QPoly, phi: &QPoly) -> QPoly {
        let jx = self.sandwich(X, true, phi_prime, phi);
        let jy = self.sandwich(Y, true, phi_prime, phi);
        qderiv(&jx, X).add(&qderiv(&jy, Y))
    }
}

/// One sandwich term of a q-plane kernel.
#[derive(Clone, Debug)]
pub struct QGammaTerm {
    /// ∂†-word applied to the left argument, in application order.
    pub left: Vec<Axis2>,
    /// Left-acting ζ⁻ insertion (upper, lower) applied after the word.
    pub left_zeta: Option<(Axis2, Axis2)>,
    pub coeff: QPoly,
    /// ∂-word applied to the right argument; last entry acts first.
    pub right: Vec<Axis2>,
}

impl QGammaTerm {
    pub fn eval(&self, f: &QPoly, g: &QPoly) -> QPoly {
        let mut lf = f.clone();
        for &ax in &self.left {
            lf = conj_qderiv(&lf, ax);
        }
        if let Some((upper, lower)) = self.left_zeta {
            lf = zeta_component(&lf, ZetaDir::Minus, upper, lower);
        }
        let mut rg = g.clone();
        for &ax in self.right.iter().rev() {
            rg = qderiv(&rg, ax);
        }
        lf.qmul(&self.coeff).qmul(&rg)
    }
}

/// Basis of polynomial solutions of Λ(∂)Φ = 0 up to total degree `max_deg`,
/// found by exact linear algebra over ℚ(q) on monomial coefficients.
pub fn solve_polynomial_kernel(eq: &QPlaneEquation, max_deg: u32) -> Vec<QPoly> {
    kernel_of(|m| eq.apply(m), max_deg)
}

/// Basis of polynomial solutions of the conjugated equation Φ′Λ(∂†←) = 0.
pub fn solve_conjugate_kernel(eq: &QPlaneEquation, max_deg: u32) -> Vec<QPoly> {
    kernel_of(|m| eq.apply_conjugate(m), max_deg)
}

fn kernel_of(op: impl Fn(&QPoly) -> QPoly, max_deg: u32) -> Vec<QPoly> {
    // monomial basis of the domain
    let mut basis = Vec::new();
    for a in 0..=max_deg {
        for b in 0..=(max_deg - a) {
            basis.push((a, b));
        }
    }
    // images and the row space of target monomials
    let mut images = Vec::with_capacity(basis.len());
    let mut rows: Vec<(u32, u32)> = Vec::new();
    for &(a, b) in &basis {
        let img = op(&QPoly::monomial(a, b, QRat::one()));
        for (k, _) in img.terms() {
            if !rows.contains(k) {
                rows.push(*k);
            }
        }
        images.push(img);
    }
    rows.sort_unstable();
    // matrix: rows = target monomials, cols = domain monomials
    let nr = rows.len();
    let nc = basis.len();
    let mut m: Vec<Vec<QRat>> = vec![vec![QRat::zero(); nc]; nr];
    for (c, img) in images.iter().enumerate() {
        for (k, v) in img.terms() {
            let r = rows.binary_search(k).expect("row registered");
            m[r][c] = v.clone();
        }
    }
    // Gauss-Jordan over the exact field
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; nc];
    let mut rank = 0usize;
    for c in 0..nc {
        let mut piv = None;
        for r in rank..nr {
            if !m[r][c].is_zero() {
                piv = Some(r);
                break;
            }
        }
        let Some(p) = piv else { continue };
        m.swap(rank, p);
        let inv = QRat::one().div(&m[rank][c]);
        for cc in 0..nc {
            m[rank][cc] = m[rank][cc].mul(&inv);
        }
        for r in 0..nr {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for cc in 0..nc {
                    let t = m[rank][cc].mul(&f);
                    m[r][cc] = m[r][cc].sub(&t);
                }
            }
        }
        pivot_of_col[c] = Some(rank);
        rank += 1;
        if rank == nr {
            break;
        }
    }
    // free columns generate the kernel
    let mut out = Vec::new();
    for c in 0..nc {
        if pivot_of_col[c].is_some() {
            continue;
        }
        let mut sol = QPoly::monomial(basis[c].0, basis[c].1, QRat::one());
        for cc in 0..nc {
            if let Some(r) = pivot_of_col[cc] {
                let coeff = m[r][c].clone();
                if !coeff.is_zero() {
                    sol = sol.sub(&QPoly::monomial(basis[cc].0, basis[cc].1, coeff));
                }
            }
        }
        out.push(sol);
    }
    out
}

/// Outcome of the end-to-end §-style verification: three exact booleans with
/// the offending residuals when a check fails.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub condition_ok: bool,
    pub condition_residuals: [QPoly; 2],
    pub gamma_identity_ok: bool,
    pub gamma_residual: QPoly,
    pub conservation_ok: bool,
    pub conservation_residual: QPoly,
}

impl VerificationReport {
    pub fn all_ok(&self) -> bool {
        self.condition_ok && self.gamma_identity_ok && self.conservation_ok
    }
}

/// Verify the model end to end for given φ, ψ and a solution pair (Φ′, Φ):
/// (i) the admissibility condition, (ii) the kernel operator identity applied
/// to Φ′⊗Φ, (iii) exact conservation ∂xJx + ∂yJy = 0.
pub fn verify_qplane_example(
    phi_coeff: &QPoly,
    psi_coeff: &QPoly,
    phi_prime: &QPoly,
    phi: &QPoly,
) -> Result<VerificationReport> {
    let eq = QPlaneEquation::new(phi_coeff.clone(), psi_coeff.clone())?;
    let condition_residuals = eq.condition_residuals();
    let condition_ok = condition_residuals.iter().all(|r| r.is_zero());
    let gamma_residual = eq.gamma_identity_residual(phi_prime, phi);
    let gamma_identity_ok = gamma_residual.is_zero();
    let conservation_residual = eq.current_divergence(phi_prime, phi);
    let conservation_ok = conservation_residual.is_zero();
    Ok(VerificationReport {
        condition_ok,
        condition_residuals,
        gamma_identity_ok,
        gamma_residual,
        conservation_ok,
        conservation_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_actions() {
        assert_eq!(qderiv(&QPoly::x(), X), QPoly::one());
        assert_eq!(qderiv(&QPoly::y(), X), QPoly::zero());
        assert_eq!(qderiv(&QPoly::y(), Y), QPoly::one());
    }

    #[test]
    fn quant_relation_dy_dx() {
        // ∂y∂x = q⁻¹ ∂x∂y on a spread of monomials
        for (a, b) in [(1u32, 1u32), (2, 1), (1, 2), (3, 2), (2, 3)] {
            let m = QPoly::monomial(a, b, QRat::one());
            let lhs = qderiv(&qderiv(&m, X), Y);
            let rhs = qderiv(&qderiv(&m, Y), X).scale(&QRat::q_pow(-1));
            assert_eq!(lhs, rhs, "failed at x^{a} y^{b}");
        }
    }

    #[test]
    fn zeta_minus_diag_scalings() {
        // ζ⁻ˣ_x(xy) = q⁻³ xy (the product rule collects q⁻²·q⁻¹)
        let xy = QPoly::x().qmul(&QPoly::y());
        let got = zeta_component(&xy, ZetaDir::Minus, X, X);
        assert_eq!(got, xy.scale(&QRat::q_pow(-3)));
        // table entry: ζ⁻ˣ_x(y) = q⁻¹ y
        assert_eq!(
            zeta_component(&QPoly::y(), ZetaDir::Minus, X, X),
            QPoly::y().scale(&QRat::q_pow(-1))
        );
    }

    #[test]
    fn zeta_inverse_property() {
        // Σ_k ζᵏ_j ζ⁻ⁱ_k = δⁱ_j on assorted polynomials
        let p = QPoly::parse("x^2*y + (q^2 - 1)*y^3 + 2*x").unwrap();
        for i in AXES {
            for j in AXES {
                let mut acc = QPoly::zero();
                for k in AXES {
                    let inner = zeta_component(&p, ZetaDir::Minus, i, k);
                    acc = acc.add(&zeta_component(&inner, ZetaDir::Plus, k, j));
                }
                let want = if i == j { p.clone() } else { QPoly::zero() };
                assert_eq!(acc, want, "inverse failed at i={i:?} j={j:?}");
            }
        }
    }

    #[test]
    fn deformed_leibniz_rule_holds() {
        // ∂ⁱ(fg) = (∂ⁱf)g + Σ_j (ζⁱ_j f)(∂^j g)
        let f = QPoly::parse("x^2 + q^1*x*y").unwrap();
        let g = QPoly::parse("y^2 + 3*x").unwrap();
        let fg = f.qmul(&g);
        for i in AXES {
            let mut rhs = qderiv(&f, i).qmul(&g);
            for j in AXES {
                let zf = zeta_component(&f, ZetaDir::Plus, i, j);
                rhs = rhs.add(&zf.qmul(&qderiv(&g, j)));
            }
            assert_eq!(qderiv(&fg, i), rhs, "Leibniz failed for ∂{i:?}");
        }
    }

    #[test]
    fn conj_deriv_annihilates_admissible_coefficients() {
        // ∂†x φ(y) = 0 and ∂†y ψ(x) = 0 for polynomials up to degree 8
        for d in 0..=8u32 {
            let phi = QPoly::monomial(0, d, QRat::one());
            assert!(conj_qderiv(&phi, X).is_zero(), "∂†x y^{d} != 0");
            let psi = QPoly::monomial(d, 0, QRat::one());
            assert!(conj_qderiv(&psi, Y).is_zero(), "∂†y x^{d} != 0");
        }
    }

    #[test]
    fn conj_deriv_of_x_constant() {
        // ∂†x(x) = -q⁻²
        let got = conj_qderiv(&QPoly::x(), X);
        assert_eq!(got, QPoly::constant(QRat::q_pow(-2)).neg());
    }

    #[test]
    fn gamma_components_match_model() {
        // φ, ψ generic monomials: Γ_x = ∂†←x φ(q⁻²y) + φ(q⁻¹y)∂x
        let phi = QPoly::monomial(0, 2, QRat::one()); // y²
        let psi = QPoly::monomial(3, 0, QRat::one()); // x³
        let eq = QPlaneEquation::new(phi, psi).unwrap();
        let terms = eq.gamma_terms(X, false);
        assert_eq!(terms.len(), 2);
        for t in &terms {
            if t.right == vec![X] {
                // φ(q⁻¹y) = q⁻² y²  (each y picks q⁻¹ under ζ⁻ˣ_x)
                assert_eq!(t.coeff, QPoly::monomial(0, 2, QRat::q_pow(-2)));
            } else {
                assert_eq!(t.left, vec![X]);
                assert_eq!(t.coeff, QPoly::monomial(0, 2, QRat::q_pow(-4)));
            }
        }
        // Γ_y sees only ψ
        let ty = eq.gamma_terms(Y, false);
        assert_eq!(ty.len(), 2);
        for t in &ty {
            assert!(t.coeff.depends_only_on_x());
        }
    }

    #[test]
    fn kernel_contains_expected_solutions() {
        let eq = QPlaneEquation::new(QPoly::one(), QPoly::one()).unwrap();
        let k1 = solve_polynomial_kernel(&eq, 1);
        assert_eq!(k1.len(), 3); // 1, x, y
        let k2 = solve_polynomial_kernel(&eq, 2);
        // includes xy since ∂x∂x(xy) = ∂y∂y(xy) = 0
        assert!(k2.iter().any(|p| !p.coeff(1, 1).is_zero()));
        for sol in &k2 {
            assert!(eq.apply(sol).is_zero());
        }
    }

    #[test]
    fn end_to_end_trivial_example() {
        let rep = verify_qplane_example(&QPoly::one(), &QPoly::one(), &QPoly::one(), &QPoly::x())
            .unwrap();
        assert!(rep.all_ok(), "{rep:?}");
    }

    #[test]
    fn non_solution_fails_conservation() {
        // Φ = x²: ∂x∂x x² = [2]_{q²} ≠ 0, so the divergence must not vanish
        let x2 = QPoly::monomial(2, 0, QRat::one());
        let rep = verify_qplane_example(&QPoly::one(), &QPoly::one(), &QPoly::one(), &x2).unwrap();
        assert!(rep.condition_ok);
        assert!(!rep.conservation_ok);
    }

    #[test]
    fn rejects_phi_depending_on_x() {
        assert!(QPlaneEquation::new(QPoly::x(), QPoly::one()).is_err());
    }
}
