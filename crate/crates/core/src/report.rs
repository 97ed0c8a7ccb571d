//! Commands over a manifold file and the reports they produce.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::corpus::{self, Caveats, LieClass};
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::hodge::{HarmonicKind, Hermitian};
use crate::invariants::{gpm_report, j_cohomology, stage_report, GpmReport, StageReport};
use crate::manifold::{parse, Model};
use crate::scalar::Scalar;
use crate::symbolic::{dstar_sigma, DiffPoly, FunctionForm, SymbolicFrame};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    DstarSigma,
    DSigma,
    DbarSigma,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::DstarSigma => "dstar-sigma",
            Check::DSigma => "d-sigma",
            Check::DbarSigma => "dbar-sigma",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        [Check::DstarSigma, Check::DSigma, Check::DbarSigma]
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown check `{s}` (expected dstar-sigma, d-sigma or dbar-sigma)")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Numbers,
    Harmonic { p: usize, q: usize, kind: HarmonicKind },
    Jcoh { p: usize, q: usize },
    Purefull { stage: usize },
    Gpm,
    Symbolic { check: Check },
}

#[derive(Clone, Debug, Serialize)]
pub struct Validation {
    pub jacobi: bool,
    pub nilpotent: bool,
    pub solvable: bool,
    pub completely_solvable: bool,
    pub unimodular: bool,
    pub integrable: bool,
    pub class: LieClass,
    pub metric: Option<String>,
    pub almost_kahler: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PurityJson {
    pub plus: String,
    pub minus: String,
    pub primitive: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FullnessJson {
    pub annihilator: String,
    pub outside: String,
    pub pairing: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageJson {
    pub stage: usize,
    pub betti: usize,
    pub dim_plus: usize,
    pub dim_minus: usize,
    pub dim_intersection: usize,
    pub dim_sum: usize,
    pub pure: bool,
    pub full: bool,
    pub purity_witness: Option<PurityJson>,
    pub fullness_witness: Option<FullnessJson>,
}

impl From<&StageReport> for StageJson {
    fn from(r: &StageReport) -> Self {
        StageJson {
            stage: r.stage,
            betti: r.betti,
            dim_plus: r.dim_plus,
            dim_minus: r.dim_minus,
            dim_intersection: r.dim_intersection,
            dim_sum: r.dim_sum,
            pure: r.pure,
            full: r.full,
            purity_witness: r.purity_witness.as_ref().map(|w| PurityJson {
                plus: w.plus.to_string(),
                minus: w.minus.to_string(),
                primitive: w.primitive.to_string(),
            }),
            fullness_witness: r.fullness_witness.as_ref().map(|w| FullnessJson {
                annihilator: w.annihilator.to_string(),
                outside: w.outside.to_string(),
                pairing: w.pairing.to_string(),
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GpmJson {
    pub degree: usize,
    pub betti: usize,
    pub dim_g_plus: usize,
    pub dim_g_minus: usize,
    /// `refined[g][j]`: `g` indexes star eigenvalue +1/-1, `j` indexes J-parity +/-.
    pub refined: [[usize; 2]; 2],
    pub intersections: [usize; 2],
    pub dim_refined_sum: usize,
    pub pure: [bool; 2],
    pub refined_full: bool,
}

impl From<&GpmReport> for GpmJson {
    fn from(r: &GpmReport) -> Self {
        GpmJson {
            degree: r.degree,
            betti: r.betti,
            dim_g_plus: r.dim_g_plus,
            dim_g_minus: r.dim_g_minus,
            refined: r.refined,
            intersections: r.intersections,
            dim_refined_sum: r.dim_refined_sum,
            pure: r.pure,
            refined_full: r.refined_full,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolicJson {
    pub check: String,
    pub pattern: Option<String>,
    /// The computed expression: a top-degree coefficient or a rendered form.
    pub result: String,
    pub star_sigma: Option<String>,
    /// Whether the closed-form star agrees with the Gram-matrix star at a rational point.
    pub star_matches_gram: Option<bool>,
    pub equations: Vec<String>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpaceJson {
    pub label: String,
    pub p: usize,
    pub q: usize,
    pub dimension: usize,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaveatsJson {
    #[serde(flatten)]
    pub flags: Caveats,
    pub class: LieClass,
    pub corrected: bool,
    pub note: Option<String>,
}

/// Every key is always present; sections a command does not compute are `null`.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub manifold: String,
    pub validation: Validation,
    pub betti: Vec<usize>,
    pub h_d: Option<Vec<Vec<usize>>>,
    pub h_dbar: Option<Vec<Vec<usize>>>,
    #[serde(rename = "h_J")]
    pub h_j: Option<Vec<Vec<usize>>>,
    pub stages: Option<Vec<StageJson>>,
    pub gpm: Option<GpmJson>,
    pub symbolic: Option<SymbolicJson>,
    pub caveats: CaveatsJson,
    pub spaces: Option<Vec<SpaceJson>>,
}

/// A manifold ready for commands: a corpus entry or a file on disk.
pub struct Target {
    pub model: Model,
    pub caveats: CaveatsJson,
}

/// Resolves a corpus name (or alias) or a path to a manifold file.
pub fn load(target: &str) -> Result<Target> {
    if let Ok(e) = corpus::entry(target) {
        let model = e.model();
        let note = (!e.note.is_empty()).then(|| e.note.to_string());
        return Ok(Target { model, caveats: CaveatsJson { flags: e.caveats(), class: e.class, corrected: e.corrected, note } });
    }
    let text = std::fs::read_to_string(target).map_err(|_| Error::UnknownManifold(target.into()))?;
    let model = parse(&text)?.build()?;
    let class = LieClass::of(&model.validation);
    Ok(Target { model, caveats: CaveatsJson { flags: Caveats::for_class(class), class, corrected: false, note: None } })
}

fn space_json(label: String, p: usize, q: usize, basis: &[Form]) -> SpaceJson {
    SpaceJson { label, p, q, dimension: basis.len(), basis: basis.iter().map(|f| f.to_string()).collect() }
}

/// `h^{p,q}_J` for `0 <= p, q <= n`.
pub fn j_table(model: &Model) -> Result<Vec<Vec<usize>>> {
    let n = model.bigrading.n();
    (0..=n).map(|p| (0..=n).map(|q| Ok(j_cohomology(&model.bigrading, p, q)?.number)).collect()).collect()
}

/// Runs a command. `metric` names a metric, or a metric pattern for `symbolic`.
pub fn run(target: &Target, cmd: &Command, metric: Option<&str>) -> Result<Report> {
    let model = &target.model;
    let v = &model.validation;
    let needs_metric = matches!(cmd, Command::Numbers | Command::Harmonic { .. } | Command::Gpm)
        || (*cmd == Command::Validate && metric.is_some());
    let herm = if needs_metric { Some(model.hermitian(metric)?) } else { None };
    let metric_name = herm.as_ref().map(|_| metric.map(String::from).unwrap_or_else(|| model.metric_names()[0].to_string()));
    let mut report = Report {
        manifold: model.name().to_string(),
        validation: Validation {
            jacobi: v.jacobi_ok,
            nilpotent: v.nilpotent,
            solvable: v.solvable,
            completely_solvable: v.completely_solvable,
            unimodular: v.unimodular,
            integrable: model.bigrading.is_integrable(),
            class: LieClass::of(v),
            metric: metric_name,
            almost_kahler: herm.as_ref().map(Hermitian::is_almost_kahler),
        },
        betti: model.bigrading.lie().betti_numbers()?,
        h_d: None,
        h_dbar: None,
        h_j: None,
        stages: None,
        gpm: None,
        symbolic: None,
        caveats: target.caveats.clone(),
        spaces: None,
    };
    match *cmd {
        Command::Validate => {}
        Command::Numbers => {
            let t = herm.as_ref().expect("metric").number_table()?;
            report.h_d = Some(t.h_d);
            report.h_dbar = Some(t.h_dbar);
            report.h_j = Some(j_table(model)?);
        }
        Command::Harmonic { p, q, kind } => {
            let h = herm.as_ref().expect("metric").harmonic_space(kind, p, q)?;
            let label = format!("H_{}^{{{p},{q}}}", kind.name());
            report.spaces = Some(vec![space_json(label, p, q, &h.space.basis())]);
        }
        Command::Jcoh { p, q } => {
            let j = j_cohomology(&model.bigrading, p, q)?;
            report.spaces = Some(vec![space_json(format!("H_J^{{{p},{q}}}"), p, q, &j.representatives)]);
        }
        Command::Purefull { stage } => {
            report.stages = Some(vec![StageJson::from(&stage_report(&model.bigrading, stage)?)]);
        }
        Command::Gpm => {
            report.gpm = Some(GpmJson::from(&gpm_report(herm.as_ref().expect("metric"))?));
        }
        Command::Symbolic { check } => {
            report.symbolic = Some(match check {
                Check::DstarSigma => dstar_check(model, metric)?,
                Check::DSigma | Check::DbarSigma => sigma_check(model, check)?,
            });
        }
    }
    Ok(report)
}

/// Rational values used to compare the closed-form star with the Gram-matrix star.
fn sample_values(fr: &SymbolicFrame, a: &str, b: &str, u: &str, f: &str) -> BTreeMap<String, Scalar> {
    let mut vals = BTreeMap::new();
    for s in fr.symbols().iter().filter(|s| s.conjugate_of.is_none()) {
        let v = match s.name.as_str() {
            x if x == a => Scalar::from_ratio(3, 2),
            x if x == b => Scalar::from_int(2),
            x if x == u => Scalar::gaussian(1, 2, 1, 3),
            x if x == f => Scalar::gaussian(2, 1, -1, 3),
            _ => Scalar::from_int(1),
        };
        vals.insert(s.name.clone(), v);
    }
    vals
}

fn dstar_check(model: &Model, pattern: Option<&str>) -> Result<SymbolicJson> {
    let fr = model.symbolic_frame()?;
    let pat = model.pattern(pattern)?;
    let all = (1u32 << model.file.dim) - 1;
    let f = fr
        .symbols()
        .iter()
        .find(|s| s.kills == all && s.conjugate_of.is_none())
        .map(|s| s.name.clone())
        .ok_or_else(|| Error::Unsupported("no constant function declared (`function f kills ...` with every derivation)".into()))?;
    let r = dstar_sigma(&fr, pat, &f)?;

    let vals = sample_values(&fr, &pat.a, &pat.b, &pat.u, &f);
    let omega = fr.instantiate(&fr.pattern_omega(pat)?, &vals)?;
    let h = Hermitian::install(model.bigrading.clone(), omega)?;
    let sigma = fr.monomial(&[1], &[], fr.var(&f)?);
    let gram = h.star(&fr.instantiate(&sigma, &vals)?);
    let matches = fr.instantiate(&r.star_sigma, &vals)? == gram;

    let note = (pat.b != "s").then(|| {
        format!(
            "{b}^2 multiplies phi2^phibar2 in this metric, so the star of {f} phi1 carries (1/2) {f} {b}^2 phi1^phi2^phibar2 and {b} takes the place of s in the nil4/rxsol3 labelling",
            b = pat.b
        )
    });
    Ok(SymbolicJson {
        check: Check::DstarSigma.name().into(),
        pattern: Some(pat.name.clone()),
        result: r.text,
        star_sigma: Some(fr.render_form(&r.star_sigma)),
        star_matches_gram: Some(matches),
        equations: Vec::new(),
        note,
    })
}

/// `d` or `dbar` of `f phi1 + g phi2` for arbitrary functions `f`, `g`.
pub fn sigma_form(model: &Model, check: Check) -> Result<(SymbolicFrame, FunctionForm)> {
    if model.bigrading.n() != 2 {
        return Err(Error::Unsupported("sigma checks are defined in complex dimension 2".into()));
    }
    let mut fr = SymbolicFrame::new(&model.bigrading);
    fr.declare("f", false, &[])?;
    fr.declare("g", false, &[])?;
    let sigma = &fr.monomial(&[1], &[], fr.var("f")?) + &fr.monomial(&[2], &[], fr.var("g")?);
    let out = match check {
        Check::DbarSigma => fr.dbar(&sigma)?,
        _ => fr.d(&sigma),
    };
    Ok((fr, out))
}

fn sigma_check(model: &Model, check: Check) -> Result<SymbolicJson> {
    let (fr, form) = sigma_form(model, check)?;
    let n = 2;
    let equations = form
        .terms()
        .map(|(m, c): (_, &DiffPoly)| {
            let mono: Vec<String> =
                m.indices().map(|i| if i < n { format!("phi{}", i + 1) } else { format!("phibar{}", i - n + 1) }).collect();
            format!("{}: {} = 0", mono.join("^"), fr.render(c))
        })
        .collect();
    Ok(SymbolicJson {
        check: check.name().into(),
        pattern: None,
        result: fr.render_form(&form),
        star_sigma: None,
        star_matches_gram: None,
        equations,
        note: None,
    })
}

fn table(out: &mut String, name: &str, t: &[Vec<usize>]) {
    let _ = writeln!(out, "{name}:");
    for (p, row) in t.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "  p={p}: {}", cells.join(" "));
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(s) = &self.symbolic {
            let _ = writeln!(out, "{}", s.result);
            for e in &s.equations {
                let _ = writeln!(out, "  {e}");
            }
            if let Some(st) = &s.star_sigma {
                let _ = writeln!(out, "star sigma = {st}");
            }
            if let Some(m) = s.star_matches_gram {
                let _ = writeln!(out, "closed-form star agrees with Gram star: {m}");
            }
            if let Some(n) = &s.note {
                let _ = writeln!(out, "note: {n}");
            }
            return out;
        }
        let v = &self.validation;
        let _ = writeln!(out, "manifold {}", self.manifold);
        let _ = writeln!(
            out,
            "class {}, unimodular {}, integrable {}",
            v.class.name(),
            v.unimodular,
            v.integrable
        );
        if let Some(m) = &v.metric {
            let _ = writeln!(out, "metric {m}, almost Kahler {}", v.almost_kahler.unwrap_or(false));
        }
        let b: Vec<String> = self.betti.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "betti {}", b.join(" "));
        if let Some(t) = &self.h_d {
            table(&mut out, "h_d", t);
        }
        if let Some(t) = &self.h_dbar {
            table(&mut out, "h_dbar", t);
        }
        if let Some(t) = &self.h_j {
            table(&mut out, "h_J", t);
        }
        for s in self.stages.iter().flatten() {
            let _ = writeln!(
                out,
                "stage {}: b={} plus={} minus={} meet={} sum={} pure={} full={}",
                s.stage, s.betti, s.dim_plus, s.dim_minus, s.dim_intersection, s.dim_sum, s.pure, s.full
            );
            if let Some(w) = &s.purity_witness {
                let _ = writeln!(out, "  purity witness: [{}] = [{}], primitive {}", w.plus, w.minus, w.primitive);
            }
            if let Some(w) = &s.fullness_witness {
                let _ = writeln!(out, "  fullness witness: [{}] pairs to {} with {}", w.annihilator, w.pairing, w.outside);
            }
        }
        if let Some(g) = &self.gpm {
            let _ = writeln!(
                out,
                "gpm degree {}: b={} g+={} g-={} refined={:?} intersections={:?} refined sum={} refined full={}",
                g.degree, g.betti, g.dim_g_plus, g.dim_g_minus, g.refined, g.intersections, g.dim_refined_sum, g.refined_full
            );
        }
        for s in self.spaces.iter().flatten() {
            let _ = writeln!(out, "{} (dim {})", s.label, s.dimension);
            for b in &s.basis {
                let _ = writeln!(out, "  {b}");
            }
        }
        let c = &self.caveats;
        let _ = writeln!(
            out,
            "caveats: nomizu={} hattori={} invariant_only={}",
            c.flags.nomizu, c.flags.hattori, c.flags.invariant_only
        );
        if let Some(n) = &c.note {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

/// Machine-readable error object.
pub fn error_json(e: &Error) -> String {
    let class = e.class();
    let mut obj = serde_json::json!({
        "error": {
            "code": class as i32,
            "class": class.name(),
            "message": e.to_string(),
        }
    });
    if let Error::Parse { line, col, .. } = e {
        obj["error"]["line"] = (*line).into();
        obj["error"]["col"] = (*col).into();
    }
    obj.to_string()
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusListing {
    pub name: &'static str,
    pub class: LieClass,
    pub integrable: bool,
    pub corrected: bool,
    pub caveats: Caveats,
    pub note: Option<&'static str>,
}

pub fn corpus_listing() -> Vec<CorpusListing> {
    corpus::CORPUS
        .iter()
        .map(|e| CorpusListing {
            name: e.name,
            class: e.class,
            integrable: e.integrable,
            corrected: e.corrected,
            caveats: e.caveats(),
            note: (!e.note.is_empty()).then_some(e.note),
        })
        .collect()
}
