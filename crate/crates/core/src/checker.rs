//! Audits of holomorphic maps along families of geodesics: isometry,
//! completeness of the family, injectivity and properness, and the three
//! reproducible examples built from them.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::base::ConvexBase;
use crate::coverings::{monomial_preimages, HolomorphicMap, IntegerMatrix};
use crate::domains::ModelDomain;
use crate::error::{Error, Result};
use crate::geodesics::{FamilySpec, GeodesicCurve, GeodesicFamily};
use crate::metric::{distance_with, DistanceValue, MetricOptions};
use crate::numerics::{halton, scan_min};
use crate::point::ComplexPoint;

/// Isometry tolerance for exactly computed metrics.
pub const ISOMETRY_TOL: f64 = 1e-9;
/// Extra slack added on top of the sandwich gaps of bracketed metrics.
pub const SANDWICH_SLACK: f64 = 1e-6;
pub const PARAMS_PER_GEODESIC: usize = 32;
pub const COMPLETENESS_GRID: usize = 256;
/// Members drawn from generator-backed families by default.
pub const DEFAULT_MEMBERS: usize = 8;
/// Half-length of the parameter window on rays and lines.
pub const DEFAULT_WINDOW: f64 = 4.0;
/// Image boundary distance below which a sequence counts as escaping.
pub const PROPER_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditOptions {
    pub params: usize,
    pub members: usize,
    pub window: f64,
    pub tol: f64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        Self {
            params: PARAMS_PER_GEODESIC,
            members: DEFAULT_MEMBERS,
            window: DEFAULT_WINDOW,
            tol: ISOMETRY_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicDeviation {
    pub id: usize,
    pub label: String,
    /// max over sampled pairs of `|K_source - K_target|`
    pub max_deviation: f64,
    /// largest sandwich gap met on this geodesic (0 for exact metrics)
    pub max_gap: f64,
    pub pairs: usize,
    pub within_tolerance: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletenessRecord {
    pub grid_size: usize,
    pub covered: usize,
    pub max_miss: f64,
    pub tol: f64,
}

impl CompletenessRecord {
    pub fn is_complete(&self) -> bool {
        self.covered == self.grid_size
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Collision {
    pub z: ComplexPoint,
    pub z_prime: ComplexPoint,
    pub image_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InjectivityReport {
    pub collisions: Vec<Collision>,
    /// grid indices grouped by common image (only groups of size >= 2)
    pub classes: Vec<Vec<usize>>,
    /// every collision of a monomial map is a pair of preimages of the
    /// same point (`None` for other maps)
    pub deck_consistent: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    IsometricAlongFamily,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryReport {
    pub map: String,
    pub family: String,
    pub per_geodesic: Vec<GeodesicDeviation>,
    pub completeness: Option<CompletenessRecord>,
    pub injectivity: Vec<Collision>,
    pub verdict: Verdict,
}

impl IsometryReport {
    pub fn max_deviation(&self) -> f64 {
        self.per_geodesic.iter().map(|g| g.max_deviation).fold(0.0, f64::max)
    }

    pub fn max_gap(&self) -> f64 {
        self.per_geodesic.iter().map(|g| g.max_gap).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "map     {}", self.map);
        let _ = writeln!(s, "family  {}", self.family);
        let _ = writeln!(s, "verdict {}", verdict_str(self.verdict));
        let _ = writeln!(s, "{:>4}  {:>12}  {:>12}  {:>6}  {:<4}  label", "id", "max_dev", "max_gap", "pairs", "ok");
        for g in &self.per_geodesic {
            let _ = writeln!(
                s,
                "{:>4}  {:>12.4e}  {:>12.4e}  {:>6}  {:<4}  {}",
                g.id,
                g.max_deviation,
                g.max_gap,
                g.pairs,
                if g.within_tolerance { "yes" } else { "no" },
                g.label
            );
        }
        if let Some(c) = &self.completeness {
            let _ = writeln!(s, "completeness {}/{} covered, max miss {:.4e}", c.covered, c.grid_size, c.max_miss);
        }
        let _ = writeln!(s, "collisions {}", self.injectivity.len());
        s
    }
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::IsometricAlongFamily => "isometric-along-family",
        Verdict::Violated => "violated",
    }
}

fn family_name(family: &GeodesicFamily) -> String {
    serde_json::to_string(family.spec()).expect("family serialises")
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Allowed deviation for one pair: `tol`, widened by both sandwich gaps and
/// [`SANDWICH_SLACK`] when either metric is bracketed.
fn allowance(tol: f64, a: &DistanceValue, b: &DistanceValue) -> f64 {
    if a.gap > 0.0 || b.gap > 0.0 {
        tol + a.gap + b.gap + SANDWICH_SLACK
    } else {
        tol
    }
}

/// Compares `K_source(gamma(t), gamma(s))` with
/// `K_target(F gamma(t), F gamma(s))` on all pairs of sampled parameters of
/// one curve.
pub fn audit_curve(f: &HolomorphicMap, curve: &GeodesicCurve, id: usize, opts: &AuditOptions) -> Result<GeodesicDeviation> {
    let source = f.source()?;
    let target = f.target()?;
    let metric = MetricOptions::permissive();
    let (lo, hi) = curve.interval.window(opts.window);
    let pts: Vec<ComplexPoint> = linspace(lo, hi, opts.params).into_iter().map(|t| curve.sample(t)).collect();
    let imgs = pts.iter().map(|p| f.apply(p)).collect::<Result<Vec<_>>>()?;
    let mut max_dev: f64 = 0.0;
    let mut max_gap: f64 = 0.0;
    let mut ok = true;
    let mut pairs = 0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let a = distance_with(&source, &pts[i], &pts[j], &metric)?;
            let b = distance_with(&target, &imgs[i], &imgs[j], &metric)?;
            let dev = (a.value - b.value).abs();
            max_dev = max_dev.max(dev);
            max_gap = max_gap.max(a.gap).max(b.gap);
            ok &= dev <= allowance(opts.tol, &a, &b);
            pairs += 1;
        }
    }
    Ok(GeodesicDeviation {
        id,
        label: curve.label.clone(),
        max_deviation: max_dev,
        max_gap,
        pairs,
        within_tolerance: ok,
    })
}

/// Isometry audit of `f` along `opts.members` members of `family`.
pub fn audit_isometry(f: &HolomorphicMap, family: &GeodesicFamily, opts: &AuditOptions) -> Result<IsometryReport> {
    let source = f.source()?;
    if family.domain() != source {
        return Err(Error::Degenerate(format!(
            "family lives in {} but the map is defined on {}",
            family.domain().name(),
            source.name()
        )));
    }
    let members = family.members(opts.members)?;
    let per_geodesic = members
        .iter()
        .enumerate()
        .map(|(id, g)| audit_curve(f, g, id, opts))
        .collect::<Result<Vec<_>>>()?;
    let verdict = if per_geodesic.iter().all(|g| g.within_tolerance) {
        Verdict::IsometricAlongFamily
    } else {
        Verdict::Violated
    };
    Ok(IsometryReport {
        map: serde_json::to_string(f).expect("map serialises"),
        family: family_name(family),
        per_geodesic,
        completeness: None,
        injectivity: Vec::new(),
        verdict,
    })
}

/// Deterministic quasi-random interior points of `domain`; `seed` shifts
/// the Halton index.
pub fn interior_grid(domain: &ModelDomain, count: usize, seed: u64) -> Result<Vec<ComplexPoint>> {
    let n = domain.dim();
    let mut out = Vec::with_capacity(count);
    let mut i = seed.wrapping_mul(1_000_003);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > 1000 * count + 1000 {
            return Err(Error::Degenerate(format!("could not sample the interior of {}", domain.name())));
        }
        let h = halton(i, 2 * n.min(4));
        i += 1;
        let p = candidate(domain, &h)?;
        if domain.contains(&p)? {
            out.push(p);
        }
    }
    Ok(out)
}

fn candidate(domain: &ModelDomain, h: &[f64]) -> Result<ComplexPoint> {
    let n = domain.dim();
    let sym = |x: f64| 2.0 * x - 1.0;
    let polar = |r: f64, t: f64| ComplexPoint::scalar(Complex64::from_polar(r, TAU * t));
    Ok(match domain {
        ModelDomain::UnitDisc | ModelDomain::UnitBall { .. } | ModelDomain::Polydisc { .. } | ModelDomain::ScaledEllipsoid { .. } => {
            if n > 4 {
                return Err(Error::Unsupported("grids above dimension 4".into()));
            }
            ComplexPoint((0..n).map(|j| Complex64::new(sym(h[2 * j]), sym(h[2 * j + 1])) * 0.95).collect())
        }
        ModelDomain::PuncturedDisc => polar(0.02 + 0.96 * h[0], h[1]),
        ModelDomain::Annulus { r } => polar((0.98 * r.ln() * sym(h[0])).exp(), h[1]),
        ModelDomain::Strip { r } => ComplexPoint::scalar(Complex64::new(0.98 * r.ln() * sym(h[0]), 10.0 * sym(h[1]))),
        ModelDomain::LeftHalfPlane => ComplexPoint::scalar(Complex64::new(-(4.0 * sym(h[0])).exp(), 10.0 * sym(h[1]))),
        ModelDomain::Tube { base } | ModelDomain::ReinhardtLog { base } => {
            if n > 4 {
                return Err(Error::Unsupported("grids above dimension 4".into()));
            }
            let (lo, hi) = base.bounding_box();
            let x: Vec<f64> = (0..n).map(|j| lo[j] + (hi[j] - lo[j]) * h[2 * j]).collect();
            if matches!(domain, ModelDomain::Tube { .. }) {
                ComplexPoint((0..n).map(|j| Complex64::new(x[j], 5.0 * sym(h[2 * j + 1]))).collect())
            } else {
                ComplexPoint((0..n).map(|j| Complex64::from_polar(x[j].exp(), PI * sym(h[2 * j + 1]))).collect())
            }
        }
    })
}

/// Euclidean miss distance from `z` to the images of the family.
pub fn miss_distance(family: &GeodesicFamily, z: &ComplexPoint, members: usize, window: f64) -> Result<f64> {
    if let Some((g, t)) = family.member_through(z)? {
        return Ok(g.sample(t).dist(z));
    }
    let mut best = f64::INFINITY;
    for g in family.members(members)? {
        let (lo, hi) = g.interval.window(window);
        let (_, d) = scan_min(|t| g.sample(t).dist(z), lo, hi, 400, 1e-12);
        best = best.min(d);
    }
    Ok(best)
}

/// Coverage of `grid` by the family: a point is covered when some member
/// passes within `tol` of it.
pub fn completeness_check(family: &GeodesicFamily, grid: &[ComplexPoint], tol: f64) -> Result<CompletenessRecord> {
    if family.members(1)?.is_empty() {
        return Err(Error::Degenerate("empty family".into()));
    }
    let mut covered = 0;
    let mut max_miss: f64 = 0.0;
    for z in grid {
        let miss = miss_distance(family, z, DEFAULT_MEMBERS, DEFAULT_WINDOW)?;
        max_miss = max_miss.max(miss);
        if miss < tol {
            covered += 1;
        }
    }
    Ok(CompletenessRecord {
        grid_size: grid.len(),
        covered,
        max_miss,
        tol,
    })
}

/// Pairs of distinct grid points with images closer than `tol`.
pub fn injectivity_probe(f: &HolomorphicMap, grid: &[ComplexPoint], tol: f64) -> Result<InjectivityReport> {
    let imgs = grid.iter().map(|z| f.apply(z)).collect::<Result<Vec<_>>>()?;
    let mut parent: Vec<usize> = (0..grid.len()).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let mut collisions = Vec::new();
    for i in 0..grid.len() {
        for j in i + 1..grid.len() {
            let gap = imgs[i].dist(&imgs[j]);
            if gap < tol && grid[i].dist(&grid[j]) >= tol {
                collisions.push(Collision {
                    z: grid[i].clone(),
                    z_prime: grid[j].clone(),
                    image_gap: gap,
                });
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..grid.len() {
        let r = root(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let classes = groups.into_values().filter(|g| g.len() > 1).collect();
    let deck_consistent = match f.monomial_matrix() {
        Some(a) => {
            let mut ok = true;
            for c in &collisions {
                let w = f.apply(&c.z)?;
                let pre = monomial_preimages(&a, &w)?;
                ok &= pre.iter().any(|p| p.dist(&c.z_prime) < 1e-9 * (1.0 + p.norm()));
            }
            Some(ok)
        }
        None => None,
    };
    Ok(InjectivityReport {
        collisions,
        classes,
        deck_consistent,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceReport {
    pub source_boundary_distances: Vec<f64>,
    pub image_boundary_distances: Vec<f64>,
    pub proper_compatible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropernessReport {
    pub sequences: Vec<SequenceReport>,
    /// every sequence has images approaching the boundary of the target
    pub proper_compatible: bool,
}

/// Boundary distances of the images of sequences leaving every compact
/// subset of the source; compatible with properness iff the images approach
/// the boundary of the target (last distance below [`PROPER_TOL`]).
pub fn properness_probe(f: &HolomorphicMap, sequences: &[Vec<ComplexPoint>]) -> Result<PropernessReport> {
    let source = f.source()?;
    let target = f.target()?;
    let mut out = Vec::with_capacity(sequences.len());
    for seq in sequences {
        let src = seq.iter().map(|z| source.boundary_distance(z)).collect::<Result<Vec<_>>>()?;
        let img = seq
            .iter()
            .map(|z| target.boundary_distance(&f.apply(z)?))
            .collect::<Result<Vec<_>>>()?;
        let proper_compatible = img.last().is_some_and(|d| *d < PROPER_TOL);
        out.push(SequenceReport {
            source_boundary_distances: src,
            image_boundary_distances: img,
            proper_compatible,
        });
    }
    let proper_compatible = out.iter().all(|s| s.proper_compatible);
    Ok(PropernessReport {
        sequences: out,
        proper_compatible,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExampleName {
    PowerDisc,
    ExpAnnulus,
    MonomialTube,
}

impl ExampleName {
    pub const ALL: [ExampleName; 3] = [Self::PowerDisc, Self::ExpAnnulus, Self::MonomialTube];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::PowerDisc => "power-disc",
            Self::ExpAnnulus => "exp-annulus",
            Self::MonomialTube => "monomial-tube",
        }
    }
}

impl std::str::FromStr for ExampleName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown example {s}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleBundle {
    pub name: ExampleName,
    pub audit: IsometryReport,
    pub completeness: CompletenessRecord,
    pub injectivity: InjectivityReport,
    pub properness: PropernessReport,
    /// preimage counts of the sampled targets (monomial example only)
    pub multiplicity: Option<Vec<usize>>,
    pub assertions: Vec<Assertion>,
}

impl ExampleBundle {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn first_failure(&self) -> Option<&Assertion> {
        self.assertions.iter().find(|a| !a.passed)
    }
}

fn assertion(name: &str, passed: bool, detail: String) -> Assertion {
    Assertion {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Settings of [`reproduce_example`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleOptions {
    /// exponent of the power map / dimension of the monomial example
    pub n: u32,
    /// annulus radius of the exp example
    pub r: f64,
    pub seed: u64,
    pub audit: AuditOptions,
}

impl Default for ExampleOptions {
    fn default() -> Self {
        Self {
            n: 2,
            r: 4.0,
            seed: 0,
            audit: AuditOptions::default(),
        }
    }
}

/// Number of antipodal geodesics audited in the monomial example.
pub const ANTIPODAL_MEMBERS: usize = 20;
/// Random targets used for the multiplicity count.
pub const MULTIPLICITY_TARGETS: usize = 50;

/// Runs the audit, completeness, injectivity and properness checks for one
/// of the three examples and records the expected outcome as assertions.
pub fn reproduce_example(name: ExampleName, opts: &ExampleOptions) -> Result<ExampleBundle> {
    match name {
        ExampleName::PowerDisc => power_disc(opts),
        ExampleName::ExpAnnulus => exp_annulus(opts),
        ExampleName::MonomialTube => monomial_tube(opts),
    }
}

fn power_disc(opts: &ExampleOptions) -> Result<ExampleBundle> {
    let n = opts.n;
    let f = HolomorphicMap::power(n)?;
    let family = GeodesicFamily::new(FamilySpec::PuncturedDiscRadial)?;
    let audit = audit_isometry(&f, &family, &opts.audit)?;
    let grid = interior_grid(&ModelDomain::PuncturedDisc, COMPLETENESS_GRID, opts.seed)?;
    let completeness = completeness_check(&family, &grid, ISOMETRY_TOL)?;
    // n-th roots of unity times a few radii: one collision class per radius
    let radii = [0.2, 0.5, 0.8];
    let mut pts = Vec::new();
    for r in radii {
        for k in 0..n {
            pts.push(ComplexPoint::scalar(Complex64::from_polar(r, 0.3 + TAU * k as f64 / n as f64)));
        }
    }
    let injectivity = injectivity_probe(&f, &pts, 1e-9)?;
    let seqs: Vec<Vec<ComplexPoint>> = [0.0, 2.0]
        .iter()
        .map(|&a| {
            (1..=20)
                .map(|k| ComplexPoint::scalar(Complex64::from_polar(1.0 - 0.5f64.powi(k), a)))
                .collect()
        })
        .collect();
    let properness = properness_probe(&f, &seqs)?;
    let mut assertions = vec![
        assertion(
            "isometric-along-family",
            audit.verdict == Verdict::IsometricAlongFamily,
            format!("max deviation {:.3e}", audit.max_deviation()),
        ),
        assertion(
            "complete-family",
            completeness.is_complete(),
            format!("{}/{} covered", completeness.covered, completeness.grid_size),
        ),
    ];
    if n >= 2 {
        assertions.push(assertion(
            "non-injective",
            injectivity.classes.len() == radii.len() && injectivity.deck_consistent == Some(true),
            format!("{} collision classes", injectivity.classes.len()),
        ));
    }
    assertions.push(assertion(
        "proper",
        properness.proper_compatible,
        "images of boundary sequences reach the boundary".into(),
    ));
    Ok(ExampleBundle {
        name: ExampleName::PowerDisc,
        audit,
        completeness,
        injectivity,
        properness,
        multiplicity: None,
        assertions,
    })
}

/// Boundary-escaping sequences `t0 + i k` of the strip.
pub fn strip_escape_sequences(r: f64) -> Vec<Vec<ComplexPoint>> {
    let a = r.ln();
    [-0.5 * a, 0.0, 0.5 * a]
        .iter()
        .map(|&t0| {
            (0..20)
                .map(|k| ComplexPoint::scalar(Complex64::new(t0, 10.0 * k as f64)))
                .collect()
        })
        .collect()
}

fn exp_annulus(opts: &ExampleOptions) -> Result<ExampleBundle> {
    let r = opts.r;
    let f = HolomorphicMap::ExpCover { target: ModelDomain::annulus(r)? };
    // the lines mapped onto the radii {t e^{is}} are the horizontal ones
    let family = GeodesicFamily::new(FamilySpec::StripHorizontal { r })?;
    let audit = audit_isometry(&f, &family, &opts.audit)?;
    let grid = interior_grid(&ModelDomain::Strip { r }, COMPLETENESS_GRID, opts.seed)?;
    let completeness = completeness_check(&family, &grid, 1e-6)?;
    let pts: Vec<ComplexPoint> = (-1..=1)
        .flat_map(|k| {
            [0.3, -0.6]
                .into_iter()
                .map(move |x| ComplexPoint::scalar(Complex64::new(x, 0.5 + TAU * k as f64)))
        })
        .collect();
    let injectivity = injectivity_probe(&f, &pts, 1e-9)?;
    let properness = properness_probe(&f, &strip_escape_sequences(r))?;
    let assertions = vec![
        assertion(
            "isometric-along-family",
            audit.verdict == Verdict::IsometricAlongFamily,
            format!("max deviation {:.3e}", audit.max_deviation()),
        ),
        assertion(
            "complete-family",
            completeness.is_complete(),
            format!("{}/{} covered", completeness.covered, completeness.grid_size),
        ),
        assertion(
            "non-proper",
            !properness.proper_compatible,
            "escaping sequences t0 + ik stay on a compact circle".into(),
        ),
    ];
    Ok(ExampleBundle {
        name: ExampleName::ExpAnnulus,
        audit,
        completeness,
        injectivity,
        properness,
        multiplicity: None,
        assertions,
    })
}

fn monomial_tube(opts: &ExampleOptions) -> Result<ExampleBundle> {
    let n = opts.n as usize;
    if n == 0 {
        return Err(Error::Degenerate("dimension must be positive".into()));
    }
    let base = ConvexBase::unit_ball(n);
    let domain = ModelDomain::ReinhardtLog { base: base.clone() };
    let a = IntegerMatrix::scalar(n, 2);
    let f = HolomorphicMap::monomial(a.clone(), domain.clone())?;
    let family = GeodesicFamily::new(FamilySpec::Antipodal {
        base: base.clone(),
        count: ANTIPODAL_MEMBERS,
    })?;
    let audit_opts = AuditOptions {
        members: ANTIPODAL_MEMBERS,
        ..opts.audit.clone()
    };
    let audit = audit_isometry(&f, &family, &audit_opts)?;
    let grid = interior_grid(&domain, COMPLETENESS_GRID, opts.seed)?;
    let completeness = completeness_check(&family, &grid, ISOMETRY_TOL)?;
    // all 2^n sign patterns of one point collide
    let p0 = ComplexPoint::from_real(&vec![0.3f64.exp(); n]);
    let mut signs = Vec::new();
    for mask in 0..(1usize << n) {
        signs.push(ComplexPoint(
            (0..n)
                .map(|j| if mask >> j & 1 == 1 { -p0[j] } else { p0[j] })
                .collect(),
        ));
    }
    let injectivity = injectivity_probe(&f, &signs, 1e-9)?;
    let target = f.target()?;
    let targets = interior_grid(&target, MULTIPLICITY_TARGETS, opts.seed + 1)?;
    let mut counts = Vec::with_capacity(targets.len());
    for w in &targets {
        let pre = monomial_preimages(&a, w)?;
        let inside = pre
            .iter()
            .filter(|p| domain.contains(p).unwrap_or(false) && a_maps_to(&f, p, w))
            .count();
        counts.push(inside);
    }
    let expected = 1usize << n;
    let seqs: Vec<Vec<ComplexPoint>> = (0..3)
        .map(|k| {
            let phi = PI * k as f64 / 3.0;
            let mut d = vec![0.0; n];
            d[0] = phi.cos();
            if n > 1 {
                d[1] = phi.sin();
            }
            (1..=20)
                .map(|j| {
                    let s = 1.0 - 0.5f64.powi(j);
                    ComplexPoint::from_real(&d.iter().map(|v| (s * v).exp()).collect::<Vec<_>>())
                })
                .collect()
        })
        .collect();
    let properness = properness_probe(&f, &seqs)?;
    let assertions = vec![
        assertion(
            "isometric-along-family",
            audit.verdict == Verdict::IsometricAlongFamily,
            format!("max deviation {:.3e}, max gap {:.3e}", audit.max_deviation(), audit.max_gap()),
        ),
        assertion(
            "complete-family",
            completeness.is_complete(),
            format!("{}/{} covered", completeness.covered, completeness.grid_size),
        ),
        assertion(
            "multiplicity",
            counts.iter().all(|&c| c == expected),
            format!("{expected} preimages on {} targets", counts.len()),
        ),
        assertion(
            "non-injective",
            injectivity.classes.len() == 1 && injectivity.classes[0].len() == expected,
            format!("collision class of size {}", injectivity.classes.first().map_or(0, |c| c.len())),
        ),
        assertion(
            "proper",
            properness.proper_compatible,
            "images of boundary sequences reach the boundary".into(),
        ),
    ];
    Ok(ExampleBundle {
        name: ExampleName::MonomialTube,
        audit,
        completeness,
        injectivity,
        properness,
        multiplicity: Some(counts),
        assertions,
    })
}

fn a_maps_to(f: &HolomorphicMap, p: &ComplexPoint, w: &ComplexPoint) -> bool {
    f.apply_raw(p).is_ok_and(|q| q.max_abs_diff(w) < 1e-10 * (1.0 + w.norm()))
}

/// Aligned summary table of example bundles, one line per bundle.
pub fn summary_table(bundles: &[ExampleBundle]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<14}  {:<6}  {:>12}  {:>12}  {:>9}  detail", "example", "result", "max_dev", "max_gap", "covered");
    for b in bundles {
        let detail: Vec<String> = b
            .assertions
            .iter()
            .map(|a| format!("{}={}", a.name, if a.passed { "ok" } else { "FAILED" }))
            .collect();
        let _ = writeln!(
            s,
            "{:<14}  {:<6}  {:>12.4e}  {:>12.4e}  {:>9}  {}",
            b.name.as_str(),
            if b.passed() { "PASS" } else { "FAIL" },
            b.audit.max_deviation(),
            b.audit.max_gap(),
            format!("{}/{}", b.completeness.covered, b.completeness.grid_size),
            detail.join(" ")
        );
        if let Some(m) = &b.multiplicity {
            let _ = writeln!(s, "{:<14}  multiplicity {}", "", m.first().copied().unwrap_or(0));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::BoundaryPoint;

    #[test]
    fn identity_on_disc_is_isometric() {
        let f = HolomorphicMap::Identity { domain: ModelDomain::UnitDisc };
        let fam = GeodesicFamily::new(FamilySpec::DiscRadialRays).unwrap();
        let rep = audit_isometry(&f, &fam, &AuditOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::IsometricAlongFamily);
        assert_eq!(rep.max_deviation(), 0.0);
        assert_eq!(rep.per_geodesic[0].pairs, 496);
    }

    #[test]
    fn circles_violate_under_squaring() {
        let f = HolomorphicMap::power(2).unwrap();
        let fam = GeodesicFamily::new(FamilySpec::CircleArcs).unwrap();
        let rep = audit_isometry(&f, &fam, &AuditOptions { members: 2, ..Default::default() }).unwrap();
        assert_eq!(rep.verdict, Verdict::Violated);
    }

    #[test]
    fn single_segment_does_not_cover() {
        let fam = GeodesicFamily::new(FamilySpec::BallSegment {
            n: 2,
            z: ComplexPoint::zeros(2),
            w: ComplexPoint::from_real(&[0.5, 0.0]),
        })
        .unwrap();
        let grid = interior_grid(&ModelDomain::ball(2), 16, 0).unwrap();
        let rec = completeness_check(&fam, &grid, 1e-6).unwrap();
        assert!(rec.covered < rec.grid_size);
    }

    #[test]
    fn injectivity_examples() {
        let sq = HolomorphicMap::power(2).unwrap();
        let pts = vec![ComplexPoint::from_real(&[0.5]), ComplexPoint::from_real(&[-0.5]), ComplexPoint::from_real(&[0.3])];
        let rep = injectivity_probe(&sq, &pts, 1e-12).unwrap();
        assert_eq!(rep.collisions.len(), 1);
        assert_eq!(rep.classes, vec![vec![0, 1]]);
        assert_eq!(rep.deck_consistent, Some(true));
        let id = HolomorphicMap::Identity { domain: ModelDomain::PuncturedDisc };
        assert!(injectivity_probe(&id, &pts, 1e-12).unwrap().collisions.is_empty());
    }

    #[test]
    fn properness_examples() {
        let sq = HolomorphicMap::power(2).unwrap();
        let seq: Vec<_> = (1..30).map(|k| ComplexPoint::from_real(&[1.0 - 0.5f64.powi(k)])).collect();
        assert!(properness_probe(&sq, std::slice::from_ref(&seq)).unwrap().proper_compatible);
        let id = HolomorphicMap::Identity { domain: ModelDomain::PuncturedDisc };
        assert!(properness_probe(&id, &[seq]).unwrap().proper_compatible);
        let exp = HolomorphicMap::ExpCover { target: ModelDomain::annulus(4.0).unwrap() };
        assert!(!properness_probe(&exp, &strip_escape_sequences(4.0)).unwrap().proper_compatible);
    }

    #[test]
    fn ball_automorphism_control() {
        let f = HolomorphicMap::BallMobius { n: 2, t: 0.7 };
        let fam = GeodesicFamily::new(FamilySpec::BallLanding {
            n: 2,
            landing: BoundaryPoint::e1(2).point,
        })
        .unwrap();
        let rep = audit_isometry(&f, &fam, &AuditOptions { members: 3, ..Default::default() }).unwrap();
        assert_eq!(rep.verdict, Verdict::IsometricAlongFamily, "{}", rep.to_text());
    }

    #[test]
    fn grids_are_interior_and_deterministic() {
        for d in [
            ModelDomain::PuncturedDisc,
            ModelDomain::annulus(4.0).unwrap(),
            ModelDomain::strip(4.0).unwrap(),
            ModelDomain::ball(2),
            ModelDomain::ReinhardtLog { base: ConvexBase::unit_ball(2) },
        ] {
            let g = interior_grid(&d, 64, 0).unwrap();
            assert_eq!(g, interior_grid(&d, 64, 0).unwrap());
            assert!(g.iter().all(|p| d.contains(p).unwrap()));
            assert_ne!(g, interior_grid(&d, 64, 3).unwrap());
        }
    }

    #[test]
    fn power_disc_bundle() {
        let b = reproduce_example(ExampleName::PowerDisc, &ExampleOptions::default()).unwrap();
        assert!(b.passed(), "{:?}", b.first_failure());
        assert_eq!(b.injectivity.classes.len(), 3);
    }
}
