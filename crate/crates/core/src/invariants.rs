//! Cohomology classes of pure type, `J`-eigenspace subgroups at even stages,
//! the star/`J` refinement in the middle degree, and the cup pairing.
//!
//! Every `H` here is invariant cohomology: closed invariant forms modulo invariant
//! boundaries.

use num_traits::Zero;

use crate::bigraded::Bigrading;
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::hodge::Hermitian;
use crate::lie::LiePresentation;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::subspace::Subspace;

#[derive(Clone, Debug)]
pub struct JCohomology {
    pub p: usize,
    pub q: usize,
    /// Closed forms of type `(p,q)`.
    pub closed: Subspace,
    pub boundaries: Subspace,
    /// Canonical representatives of a basis of the classes.
    pub representatives: Vec<Form>,
    pub number: usize,
}

/// Two closed forms of opposite `J`-parity in the same class.
#[derive(Clone, Debug, PartialEq)]
pub struct PurityWitness {
    pub plus: Form,
    pub minus: Form,
    /// `d primitive = plus - minus`.
    pub primitive: Form,
}

/// A class cup-orthogonal to both eigenspace images, and a class it detects.
#[derive(Clone, Debug, PartialEq)]
pub struct FullnessWitness {
    pub annihilator: Form,
    pub outside: Form,
    pub pairing: Scalar,
}

#[derive(Clone, Debug)]
pub struct StageReport {
    pub stage: usize,
    pub betti: usize,
    pub dim_plus: usize,
    pub dim_minus: usize,
    pub dim_intersection: usize,
    pub dim_sum: usize,
    pub pure: bool,
    pub full: bool,
    pub purity_witness: Option<PurityWitness>,
    pub fullness_witness: Option<FullnessWitness>,
}

#[derive(Clone, Debug)]
pub struct GpmReport {
    pub degree: usize,
    pub betti: usize,
    pub dim_g_plus: usize,
    pub dim_g_minus: usize,
    /// `[g+, g-] x [J+, J-]`.
    pub refined: [[usize; 2]; 2],
    /// Dimension of `H_{g,J+} ∩ H_{g,J-}` for `g+` and `g-`.
    pub intersections: [usize; 2],
    pub dim_refined_sum: usize,
    pub pure: [bool; 2],
    pub refined_full: bool,
}

pub fn j_cohomology(b: &Bigrading, p: usize, q: usize) -> Result<JCohomology> {
    let lie = b.lie();
    lie.require_valid()?;
    let k = p + q;
    if p > b.n() || q > b.n() {
        return Err(Error::DegreeMismatch { expected: b.n(), found: p.max(q) });
    }
    let closed = lie.cocycles(k).intersect(&b.bidegree_space(p, q))?;
    let boundaries = lie.boundaries(k);
    let number = closed.add(&boundaries)?.quotient_dim(&boundaries)?;
    let representatives = closed.representatives_modulo(&boundaries)?;
    Ok(JCohomology { p, q, closed, boundaries, representatives, number })
}

/// Sum of the bidegree spaces of degree `k` with `p - q ≡ residue (mod 4)`.
fn parity_space(b: &Bigrading, k: usize, residue: i64) -> Result<Subspace> {
    let mut s = Subspace::zero(b.dim(), k);
    for p in 0..=k.min(b.n()) {
        let q = k - p;
        if q > b.n() || (p as i64 - q as i64).rem_euclid(4) != residue {
            continue;
        }
        s = s.add(&b.bidegree_space(p, q))?;
    }
    Ok(s)
}

fn real_part(f: &Form) -> Form {
    f.map_coeffs(|c| Scalar::real(c.re.clone()))
}

fn imag_part(f: &Form) -> Form {
    f.map_coeffs(|c| Scalar::real(c.im.clone()))
}

fn combine(basis: &[Form], coeffs: &[Scalar], dim: usize, k: usize) -> Form {
    basis.iter().zip(coeffs).fold(Form::zero(dim, k), |acc, (b, c)| &acc + &b.scale(c))
}

pub fn stage_report(b: &Bigrading, stage: usize) -> Result<StageReport> {
    if stage % 2 == 1 {
        return Err(Error::OddStage(stage));
    }
    if stage > b.dim() {
        return Err(Error::StageTooLarge { stage, dim: b.dim() });
    }
    let lie = b.lie();
    lie.require_valid()?;
    let dim = b.dim();
    let z = lie.cocycles(stage);
    let bd = lie.boundaries(stage);
    let w_plus = z.intersect(&parity_space(b, stage, 0)?)?;
    let w_minus = z.intersect(&parity_space(b, stage, 2)?)?;
    let h_plus = w_plus.add(&bd)?;
    let h_minus = w_minus.add(&bd)?;
    let inter = h_plus.intersect(&h_minus)?;
    let sum = h_plus.add(&h_minus)?;
    let betti = z.quotient_dim(&bd)?;
    let dim_intersection = inter.quotient_dim(&bd)?;
    let dim_sum = sum.quotient_dim(&bd)?;
    let pure = dim_intersection == 0;
    let full = dim_sum == betti;

    let purity_witness = if pure { None } else { purity_witness(lie, &w_plus, &w_minus, &bd, stage)? };
    let fullness_witness = if full { None } else { fullness_witness(lie, &sum, dim - stage, &z)? };
    if (!pure && purity_witness.is_none()) || (!full && fullness_witness.is_none()) {
        return Err(Error::Internal(format!("no witness found at stage {stage}")));
    }
    Ok(StageReport {
        stage,
        betti,
        dim_plus: h_plus.quotient_dim(&bd)?,
        dim_minus: h_minus.quotient_dim(&bd)?,
        dim_intersection,
        dim_sum,
        pure,
        full,
        purity_witness,
        fullness_witness,
    })
}

fn purity_witness(
    lie: &LiePresentation,
    w_plus: &Subspace,
    w_minus: &Subspace,
    bd: &Subspace,
    k: usize,
) -> Result<Option<PurityWitness>> {
    let dim = lie.dim();
    let (pb, mb, bb) = (w_plus.basis(), w_minus.basis(), bd.basis());
    let mut cols: Vec<Vec<Scalar>> = pb.iter().map(Form::to_vector).collect();
    cols.extend(mb.iter().map(|f| (-f).to_vector()));
    cols.extend(bb.iter().map(Form::to_vector));
    let m = Matrix::from_columns(w_plus.ambient_dimension(), &cols);
    for v in m.nullspace() {
        let plus = combine(&pb, &v[..pb.len()], dim, k);
        let minus = combine(&mb, &v[pb.len()..pb.len() + mb.len()], dim, k);
        for part in [real_part, imag_part] {
            let (p, q) = (part(&plus), part(&minus));
            if bd.contains(&p) {
                continue;
            }
            let primitive = lie
                .exact_preimage(&(&p - &q))
                .ok_or_else(|| Error::Internal("purity witness difference is not exact".into()))?;
            return Ok(Some(PurityWitness { plus: p, minus: q, primitive }));
        }
    }
    Ok(None)
}

/// Classes in degree `dual` cup-orthogonal to `span`.
pub fn annihilator(lie: &LiePresentation, span: &Subspace, dual: usize) -> Result<Subspace> {
    let zd = lie.cocycles(dual);
    let zb = zd.basis();
    let sb = span.basis();
    if zb.is_empty() {
        return Ok(zd);
    }
    let rows: Vec<Vec<Scalar>> = sb
        .iter()
        .map(|s| zb.iter().map(|z| (s ^ z).top_coefficient()).collect())
        .collect();
    let m = if rows.is_empty() { Matrix::zeros(0, zb.len()) } else { Matrix::from_rows(rows) };
    let forms: Vec<Form> = m.nullspace().iter().map(|c| combine(&zb, c, lie.dim(), dual)).collect();
    Subspace::reduce(lie.dim(), dual, &forms)
}

fn fullness_witness(lie: &LiePresentation, sum: &Subspace, dual: usize, z: &Subspace) -> Result<Option<FullnessWitness>> {
    let ann = annihilator(lie, sum, dual)?;
    let bd = lie.boundaries(dual);
    for a in ann.representatives_modulo(&bd)? {
        for c in z.basis() {
            let pairing = (&c ^ &a).top_coefficient();
            if !pairing.is_zero() {
                return Ok(Some(FullnessWitness { annihilator: a, outside: c, pairing }));
            }
        }
    }
    Ok(None)
}

/// `∫ a ^ b` with unit volume, for closed forms of complementary degree.
pub fn cup_pair(lie: &LiePresentation, a: &Form, b: &Form) -> Result<Scalar> {
    if a.dim() != lie.dim() || b.dim() != lie.dim() {
        return Err(Error::DimensionMismatch { left: lie.dim(), right: a.dim().max(b.dim()) });
    }
    if a.degree() + b.degree() != lie.dim() {
        return Err(Error::WrongDegrees(a.degree(), b.degree()));
    }
    if !lie.differential(a)?.is_zero() || !lie.differential(b)?.is_zero() {
        return Err(Error::NotClosed);
    }
    Ok(lie.integrate(&a.wedge(b)?))
}

pub fn gpm_report(h: &Hermitian) -> Result<GpmReport> {
    let dim = h.dim();
    if dim % 4 != 0 {
        return Err(Error::NotDivisibleByFour(dim));
    }
    h.require_unimodular()?;
    let b = h.bigrading();
    let lie = b.lie();
    let m = dim / 2;
    let z = lie.cocycles(m);
    let bd = lie.boundaries(m);
    let betti = z.quotient_dim(&bd)?;

    let t = b.frame().to_real_matrix(m);
    let harmonic = Subspace::from_vectors(dim, m, h.laplacian_d(m).nullspace().iter().map(|v| t.mul_vec(v)).collect());
    if harmonic.dimension() != betti {
        return Err(Error::Internal("harmonic middle forms do not match the middle Betti number".into()));
    }
    let star = h.star_matrix(m);
    let ident = Matrix::identity(star.rows());
    let eigen = |s: Scalar| Subspace::from_vectors(dim, m, star.sub(&ident.scale(&s)).nullspace());
    let g_spaces = [eigen(Scalar::from_int(1)), eigen(Scalar::from_int(-1))];
    let h_g: Vec<Subspace> = g_spaces.iter().map(|g| harmonic.intersect(g)).collect::<Result<_>>()?;
    if h_g[0].dimension() + h_g[1].dimension() != betti {
        return Err(Error::Internal("star eigenspaces do not split the harmonic middle forms".into()));
    }
    let j_spaces = [parity_space(b, m, 0)?, parity_space(b, m, 2)?];
    let mut refined = [[0usize; 2]; 2];
    let mut classes: Vec<Vec<Subspace>> = Vec::new();
    for (gi, g) in g_spaces.iter().enumerate() {
        let zg = z.intersect(g)?;
        let mut row = Vec::new();
        for (ji, j) in j_spaces.iter().enumerate() {
            let w = zg.intersect(j)?;
            if !w.is_subspace_of(&harmonic) {
                return Err(Error::Internal("closed star-eigenforms are not harmonic".into()));
            }
            let c = w.add(&bd)?;
            refined[gi][ji] = c.quotient_dim(&bd)?;
            row.push(c);
        }
        classes.push(row);
    }
    let mut intersections = [0usize; 2];
    let mut total = bd.clone();
    for gi in 0..2 {
        intersections[gi] = classes[gi][0].intersect(&classes[gi][1])?.quotient_dim(&bd)?;
        total = total.add(&classes[gi][0])?.add(&classes[gi][1])?;
    }
    let dim_refined_sum = total.quotient_dim(&bd)?;
    Ok(GpmReport {
        degree: m,
        betti,
        dim_g_plus: h_g[0].dimension(),
        dim_g_minus: h_g[1].dimension(),
        refined,
        intersections,
        dim_refined_sum,
        pure: [intersections[0] == 0, intersections[1] == 0],
        refined_full: dim_refined_sum == betti,
    })
}
