//! The verification catalog: every check, the tasks that measure them, and
//! the checks derived from other measurements.

use crate::config::{Suite, SuiteConfig};
use epr_phase::entangled::{
    eigen_residual, entangled_state, eta_state, label_grid, overlap_law, overlap_summed, resolution_check, xi_state,
    Resolution,
};
use epr_phase::fock::{ladder, quadrature};
use epr_phase::ordering::{
    hermite2, hermite_integral_check, ordering_factors, ordering_reports, OrderingSetup, PowerOrder,
    COEFFICIENT_TOLERANCE,
};
use epr_phase::weyl::{delta_product, dequantize_coherent, mode_to_entangled_coords, round_trip_weight, wigner_to_delta_weight};
use epr_phase::xform::{
    complex_forward, complex_inverse, gaussian_integral, kernel_normalization, parseval_gap, real_forward, real_inverse,
};
use epr_phase::{
    ComplexGrid, DeltaOrder, EntangledLabel, Error, FockSpace, GridFunction, Ladder, Mode, Operator, PhasePoint,
    Quadrature, WeylMaps, C64,
};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Number of records in a report over every suite.
pub const CATALOG_SIZE: usize = 70;

/// Pairs `(n, m)` covered by the ordering suite.
pub const ORDERING_PAIRS: [(usize, usize); 10] =
    [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0), (0, 3), (1, 2), (2, 1), (3, 0)];

const RESOLUTIONS: [(Resolution, &str, &str); 4] = [
    (Resolution::Eta, "eta", "eta-completeness"),
    (Resolution::Xi, "xi", "xi-completeness"),
    (Resolution::MixedEtaXi, "eta_xi", "mixed-completeness"),
    (Resolution::MixedXiEta, "xi_eta", "mixed-completeness-reversed"),
];

/// How a measured value is judged against the tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rule {
    /// Passes when `measured <= tolerance`.
    AtMost,
    /// Passes when `|measured - target| <= tolerance`.
    Near(f64),
    /// Like `AtMost`, but a miss is flagged instead of failed.
    Flag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckSpec {
    pub name: String,
    pub suite: Suite,
    pub tag: &'static str,
    pub tolerance: f64,
    pub rule: Rule,
}

fn spec(name: impl Into<String>, suite: Suite, tag: &'static str, tolerance: f64, rule: Rule) -> CheckSpec {
    CheckSpec { name: name.into(), suite, tag, tolerance, rule }
}

/// Every check in report order.
pub fn catalog() -> Vec<CheckSpec> {
    use Rule::*;
    use Suite::*;
    let mut out = vec![
        spec("fock.canonical_commutator", Fock, "ladder-commutator", 1e-12, AtMost),
        spec("fock.pair_commutator", Fock, "pair-commutator", 1e-12, AtMost),
        spec("states.eigenrelations", States, "entangled-eigenrelations", 1e-6, AtMost),
        spec("states.overlap_law", States, "eta-xi-overlap", 1e-6, AtMost),
    ];
    for (_, key, tag) in RESOLUTIONS {
        out.push(spec(format!("states.resolution.{key}"), States, tag, 1e-3, AtMost));
    }
    for (_, key, tag) in RESOLUTIONS {
        out.push(spec(format!("states.resolution_halving.{key}"), States, tag, 0.1, Near(0.5)));
    }
    out.extend([
        spec("weyl.hermiticity", Weyl, "wigner-operator", 1e-10, AtMost),
        spec("weyl.trace_constancy", Weyl, "wigner-operator", 1e-2, AtMost),
        spec("weyl.quantize_identity", Weyl, "delta-product-completeness", 1e-3, AtMost),
        spec("weyl.dual_route", Weyl, "coherent-weyl-expansion", 1e-2, AtMost),
        spec("weyl.wigner_to_delta", Weyl, "wigner-to-delta", 1e-2, AtMost),
        spec("weyl.delta_to_wigner", Weyl, "delta-to-wigner", 1e-2, AtMost),
        spec("weyl.round_trip", Weyl, "mutual-transforms", 1e-2, AtMost),
        spec("weyl.transform_refinement", Weyl, "mutual-transforms", 1.0, AtMost),
        spec("weyl.function_correspondence", Weyl, "operator-function-correspondence", 1e-2, AtMost),
        spec("xform.real_round_trip", Xform, "real-transform-pair", 1e-4, AtMost),
        spec("xform.real_parseval", Xform, "real-transform-pair", 1e-6, AtMost),
        spec("xform.complex_round_trip", Xform, "complex-transform-pair", 1e-4, AtMost),
        spec("xform.complex_parseval", Xform, "complex-parseval", 1e-4, AtMost),
        spec("xform.kernel_normalization", Xform, "kernel-normalization", 1e-2, AtMost),
        spec("xform.kernel_extent", Xform, "kernel-normalization", 1.0, AtMost),
        spec("xform.gaussian_integral", Xform, "gaussian-integral", 1e-8, AtMost),
        spec("ordering.hermite_recurrence", Ordering, "two-variable-hermite", 1e-12, AtMost),
        spec("ordering.hermite_integral", Ordering, "hermite-integral", 1e-3, AtMost),
    ]);
    for (n, m) in ORDERING_PAIRS {
        for order in PowerOrder::ALL {
            out.push(spec(conversion_name(n, m, order), Ordering, order_tag(order), 1e-2, AtMost));
        }
    }
    for (n, m) in ORDERING_PAIRS {
        for order in PowerOrder::ALL {
            out.push(spec(paper_name(n, m, order), Ordering, order_tag(order), COEFFICIENT_TOLERANCE, Flag));
        }
    }
    out
}

fn order_tag(order: PowerOrder) -> &'static str {
    match order {
        PowerOrder::DaggerFirst => "ordering-dagger-first",
        PowerOrder::PlainFirst => "ordering-plain-first",
    }
}

fn conversion_name(n: usize, m: usize, order: PowerOrder) -> String {
    format!("ordering.convert.n{n}m{m}.{}", order.name())
}

fn paper_name(n: usize, m: usize, order: PowerOrder) -> String {
    format!("ordering.paper.n{n}m{m}.{}", order.name())
}

/// One measured quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub value: f64,
    pub warning: Option<String>,
    pub detail: Option<String>,
}

impl Measurement {
    pub fn value(value: f64) -> Self {
        Measurement { value, warning: None, detail: None }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

pub type Measurements = Vec<(String, Measurement)>;

type TaskFn = Box<dyn Fn(&Context) -> Result<Measurements, Error> + Send + Sync>;

/// A unit of work producing one or more named measurements. Names outside
/// the catalog feed derived checks only.
pub struct Task {
    pub id: String,
    pub suite: Suite,
    pub outputs: Vec<String>,
    run: TaskFn,
}

impl Task {
    fn new(
        id: impl Into<String>,
        suite: Suite,
        outputs: Vec<String>,
        run: impl Fn(&Context) -> Result<Measurements, Error> + Send + Sync + 'static,
    ) -> Self {
        Task { id: id.into(), suite, outputs, run: Box::new(run) }
    }

    pub fn run(&self, ctx: &Context) -> Result<Measurements, Error> {
        (self.run)(ctx)
    }
}

/// A check computed from other measurements once every task has finished.
pub struct Derived {
    pub name: String,
    pub inputs: Vec<String>,
    pub combine: fn(&[f64]) -> f64,
}

/// Shared, lazily built state for one run.
pub struct Context {
    pub config: SuiteConfig,
    trace_maps: OnceLock<Result<WeylMaps, Error>>,
    oracle_maps: OnceLock<Result<WeylMaps, Error>>,
}

impl Context {
    pub fn new(config: SuiteConfig) -> Self {
        Context { config, trace_maps: OnceLock::new(), oracle_maps: OnceLock::new() }
    }

    /// Calibrated maps at `cutoff` with the default inner grid.
    fn trace_maps(&self) -> Result<&WeylMaps, Error> {
        let c = &self.config;
        self.trace_maps
            .get_or_init(|| WeylMaps::new(FockSpace::new(c.cutoff)?, c.inner.plane())?.calibrated())
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Calibrated maps at `oracle_cutoff` with the oracle inner grid.
    fn oracle_maps(&self) -> Result<&WeylMaps, Error> {
        let c = &self.config;
        self.oracle_maps
            .get_or_init(|| WeylMaps::new(FockSpace::new(c.oracle_cutoff)?, c.oracle_grid.plane())?.calibrated())
            .as_ref()
            .map_err(Clone::clone)
    }
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn ratio(v: &[f64]) -> f64 {
    v[1] / v[0]
}

fn worst_ratio(v: &[f64]) -> f64 {
    v.chunks(2).map(ratio).fold(0.0, f64::max)
}

/// Tasks for the selected suites, in catalog order.
pub fn tasks(suites: &[Suite]) -> Vec<Task> {
    let mut out = Vec::new();
    for &suite in suites {
        match suite {
            Suite::Fock => out.push(Task::new(
                "fock.commutators",
                suite,
                names(&["fock.canonical_commutator", "fock.pair_commutator"]),
                fock_commutators,
            )),
            Suite::States => {
                out.push(Task::new("states.eigenrelations", suite, names(&["states.eigenrelations"]), eigenrelations));
                out.push(Task::new("states.overlap_law", suite, names(&["states.overlap_law"]), overlap));
                for (which, key, _) in RESOLUTIONS {
                    for fine in [false, true] {
                        let name = if fine { format!("aux.resolution_fine.{key}") } else { format!("states.resolution.{key}") };
                        let out_name = name.clone();
                        out.push(Task::new(name.clone(), suite, vec![name], move |ctx| resolution(ctx, which, fine, &out_name)));
                    }
                }
            }
            Suite::Weyl => {
                out.push(Task::new(
                    "weyl.wigner_operator",
                    suite,
                    names(&["weyl.hermiticity", "weyl.trace_constancy"]),
                    wigner_basics,
                ));
                out.push(Task::new("weyl.dual_route", suite, names(&["weyl.dual_route"]), dual_route));
                out.push(Task::new(
                    "weyl.field",
                    suite,
                    names(&["weyl.wigner_to_delta", "weyl.delta_to_wigner", "weyl.round_trip", "weyl.function_correspondence"]),
                    |ctx| field(ctx, false),
                ));
                out.push(Task::new(
                    "weyl.field_refined",
                    suite,
                    names(&["weyl.quantize_identity", "aux.refined.wigner_to_delta", "aux.refined.delta_to_wigner", "aux.refined.round_trip"]),
                    |ctx| field(ctx, true),
                ));
            }
            Suite::Xform => {
                out.push(Task::new("xform.real", suite, names(&["xform.real_round_trip", "xform.real_parseval"]), real_pair));
                out.push(Task::new(
                    "xform.complex",
                    suite,
                    names(&["xform.complex_round_trip", "xform.complex_parseval"]),
                    complex_pair,
                ));
                out.push(Task::new(
                    "xform.kernel",
                    suite,
                    names(&["xform.kernel_normalization", "aux.kernel_narrow"]),
                    kernel,
                ));
                out.push(Task::new("xform.gaussian", suite, names(&["xform.gaussian_integral"]), gaussian));
            }
            Suite::Ordering => {
                out.push(Task::new(
                    "ordering.hermite",
                    suite,
                    names(&["ordering.hermite_recurrence", "ordering.hermite_integral"]),
                    hermite,
                ));
                let mut outputs = Vec::new();
                for (n, m) in ORDERING_PAIRS {
                    for order in PowerOrder::ALL {
                        outputs.push(conversion_name(n, m, order));
                        outputs.push(paper_name(n, m, order));
                    }
                }
                out.push(Task::new("ordering.conversions", suite, outputs, conversions));
            }
        }
    }
    out
}

/// Derived checks for the selected suites.
pub fn derived(suites: &[Suite]) -> Vec<Derived> {
    let mut out = Vec::new();
    if suites.contains(&Suite::States) {
        for (_, key, _) in RESOLUTIONS {
            out.push(Derived {
                name: format!("states.resolution_halving.{key}"),
                inputs: vec![format!("states.resolution.{key}"), format!("aux.resolution_fine.{key}")],
                combine: ratio,
            });
        }
    }
    if suites.contains(&Suite::Weyl) {
        let mut inputs = Vec::new();
        for k in ["wigner_to_delta", "delta_to_wigner", "round_trip"] {
            inputs.push(format!("weyl.{k}"));
            inputs.push(format!("aux.refined.{k}"));
        }
        out.push(Derived { name: "weyl.transform_refinement".into(), inputs, combine: worst_ratio });
    }
    if suites.contains(&Suite::Xform) {
        out.push(Derived {
            name: "xform.kernel_extent".into(),
            inputs: names(&["aux.kernel_narrow", "xform.kernel_normalization"]),
            combine: ratio,
        });
    }
    out
}

fn m(name: &str, value: f64) -> (String, Measurement) {
    (name.to_string(), Measurement::value(value))
}

fn fock_commutators(ctx: &Context) -> Result<Measurements, Error> {
    let space = FockSpace::new(ctx.config.cutoff)?;
    let safe = space.cutoff() - 1;
    let mut canonical: f64 = 0.0;
    for (i, mi) in [Mode::One, Mode::Two].into_iter().enumerate() {
        for (j, mj) in [Mode::One, Mode::Two].into_iter().enumerate() {
            let c = ladder(space, mi, Ladder::Lower).commutator(&ladder(space, mj, Ladder::Raise))?;
            let want = if i == j { Operator::identity(space) } else { Operator::zeros(space) };
            canonical = canonical.max(c.sub(&want)?.project_low(safe)?.max_abs());
        }
        let q = quadrature(space, mi, Quadrature::Position);
        let p = quadrature(space, mi, Quadrature::Momentum);
        let c = q.commutator(&p)?.sub(&Operator::identity(space).scale(C64::new(0.0, 1.0)))?;
        canonical = canonical.max(c.project_low(safe)?.max_abs());
    }
    let (x, y) = ordering_factors(space);
    let pair = x.commutator(&y)?.add(&Operator::identity(space).scale(C64::new(2.0, 0.0)))?.project_low(safe)?.max_abs();
    Ok(vec![m("fock.canonical_commutator", canonical), m("fock.pair_commutator", pair)])
}

fn eigenrelations(ctx: &Context) -> Result<Measurements, Error> {
    let space = FockSpace::new(ctx.config.scalar_cutoff)?;
    let level = 2 * space.cutoff() / 3;
    let mut worst: f64 = 0.0;
    for z in label_grid(5, 1.2) {
        for label in [EntangledLabel::eta(z), EntangledLabel::xi(z)] {
            worst = worst.max(eigen_residual(space, &entangled_state(space, label), label, level)?);
        }
    }
    Ok(vec![(
        "states.eigenrelations".into(),
        Measurement::value(worst).with_detail(format!("cutoff {}, level {level}, 5x5 labels", space.cutoff())),
    )])
}

fn overlap(ctx: &Context) -> Result<Measurements, Error> {
    let space = FockSpace::new(ctx.config.scalar_cutoff)?;
    let labels = label_grid(5, 1.2);
    let etas: Vec<_> = labels.iter().map(|z| eta_state(space, *z)).collect();
    let xis: Vec<_> = labels.iter().map(|z| xi_state(space, *z)).collect();
    let mut worst: f64 = 0.0;
    for (a, e) in labels.iter().zip(&etas) {
        for (b, x) in labels.iter().zip(&xis) {
            worst = worst.max((overlap_summed(e, x)? / overlap_law(*a, *b) - 1.0).norm());
        }
    }
    Ok(vec![m("states.overlap_law", worst)])
}

fn resolution(ctx: &Context, which: Resolution, fine: bool, name: &str) -> Result<Measurements, Error> {
    let c = &ctx.config;
    let g = c.resolution_grid;
    let grid = if fine { ComplexGrid::plane(2 * g.points - 1, g.extent)? } else { g.plane() };
    let out = resolution_check(FockSpace::new(c.resolution_cutoff)?, &grid, which, c.resolution_level)?;
    let mut meas = Measurement::value(out.deviation)
        .with_detail(format!("G={} L={} level {}", grid.points(), grid.extent(), c.resolution_level));
    if out.boundary_warning() {
        meas.warning = Some(format!("integrand density {:.1e} on the grid boundary", out.boundary));
    }
    Ok(vec![(name.to_string(), meas)])
}

/// Nine phase points well inside every default grid.
pub fn interior_points() -> Vec<PhasePoint> {
    let v = [-0.4, 0.0, 0.4];
    v.iter().flat_map(|&a| v.iter().map(move |&b| PhasePoint::new(C64::new(a, 0.5 * b), C64::new(0.5 * b, a)))).collect()
}

fn wigner_basics(ctx: &Context) -> Result<Measurements, Error> {
    let maps = ctx.trace_maps()?;
    let mut herm: f64 = 0.0;
    let mut traces = Vec::new();
    for pt in interior_points() {
        herm = herm.max(maps.wigner_operator(pt).hermiticity_defect());
        traces.push(maps.delta_trace(pt));
    }
    let mean = traces.iter().sum::<C64>() / traces.len() as f64;
    let spread = traces.iter().map(|t| (t - mean).norm()).fold(0.0, f64::max) / mean.norm();
    Ok(vec![
        m("weyl.hermiticity", herm),
        (
            "weyl.trace_constancy".into(),
            Measurement::value(spread).with_detail(format!("mean trace {:.6e}", mean.re)),
        ),
    ])
}

fn dual_route(ctx: &Context) -> Result<Measurements, Error> {
    let maps = ctx.oracle_maps()?;
    let space = maps.space();
    let grid = ctx.config.coherent_grid.plane();
    let a1 = ladder(space, Mode::One, Ladder::Lower);
    let a2d = ladder(space, Mode::Two, Ladder::Raise);
    let n1 = ladder(space, Mode::One, Ladder::Raise).compose(&a1)?;
    let ops = [Operator::identity(space), a1.clone(), a2d.clone(), a1.add(&a2d)?, n1];
    let alphas = [C64::new(0.0, 0.0), C64::new(0.7, 0.0), C64::new(0.0, -0.5), C64::new(0.6, 0.8)];
    let mut worst: f64 = 0.0;
    for x in alphas {
        for y in alphas {
            let pt = mode_to_entangled_coords(x, y);
            for op in &ops {
                let t = maps.dequantize_trace(op, pt)?;
                let c = dequantize_coherent(space, op, x, y, &grid)?;
                worst = worst.max((t - c).norm());
            }
        }
    }
    Ok(vec![m("weyl.dual_route", worst)])
}

/// Label pairs `(eta, xi)` for the mutual-transform checks.
pub fn transform_labels() -> [(C64, C64); 3] {
    [
        (C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
        (C64::new(0.3, -0.2), C64::new(0.1, 0.4)),
        (C64::new(0.0, -0.4), C64::new(0.5, 0.0)),
    ]
}

/// Largest entry of `op - reference`, and that value over the largest entry
/// of `reference`.
fn deviation(op: &Operator, reference: &Operator) -> Result<(f64, f64), Error> {
    let d = op.max_abs_diff(reference)?;
    Ok((d, d / reference.max_abs()))
}

fn worst(acc: &mut (f64, f64), d: (f64, f64)) {
    acc.0 = acc.0.max(d.0);
    acc.1 = acc.1.max(d.1);
}

fn field(ctx: &Context, refined: bool) -> Result<Measurements, Error> {
    let c = &ctx.config;
    let (inner, outer) = if refined { (c.refined_inner, c.refined_outer) } else { (c.inner, c.outer) };
    let space = FockSpace::new(c.block_level)?;
    let maps = WeylMaps::new(space, inner.plane())?;
    let outer = outer.planes();
    let labels = transform_labels();
    let points: Vec<PhasePoint> = labels.iter().map(|&(eta, xi)| PhasePoint::new(xi, eta)).collect();
    let gaussian = GridFunction::from_planes_fn(outer, |nu, mu| C64::new((-nu.norm_sqr() - mu.norm_sqr()).exp(), 0.0))?;

    let mut weights = Vec::new();
    for &(eta, xi) in &labels {
        weights.push(wigner_to_delta_weight(&outer, eta, xi)?);
    }
    for pt in &points {
        weights.push(round_trip_weight(&outer, *pt)?);
    }
    weights.push(if refined { GridFunction::ones(outer) } else { gaussian.scale(C64::new(1.0 / (PI * PI), 0.0)) });
    let refs: Vec<&GridFunction> = weights.iter().collect();
    let ops = maps.integrate_wigner(&outer, &refs)?;
    let (w2d, rest) = ops.split_at(labels.len());
    let (trip, last) = rest.split_at(points.len());

    let mut to_delta = (0.0, 0.0);
    for (op, &(eta, xi)) in w2d.iter().zip(&labels) {
        worst(&mut to_delta, deviation(op, &delta_product(space, eta, xi, DeltaOrder::NuFirst))?);
    }
    let mut to_wigner = (0.0, 0.0);
    let mut rt = (0.0, 0.0);
    for (op, pt) in trip.iter().zip(&points) {
        let delta = maps.wigner_operator(*pt);
        worst(&mut to_wigner, deviation(&maps.delta_to_wigner(*pt, &outer)?, &delta)?);
        worst(&mut rt, deviation(op, &delta)?);
    }
    let prefix = if refined { "aux.refined" } else { "weyl" };
    let grids = format!("inner G={} L={}, outer G={} L={}", inner.points, inner.extent, outer.points(), outer.extent());
    let record = |d: (f64, f64)| Measurement::value(d.0).with_detail(format!("{grids}; relative {:.2e}", d.1));
    let mut out = vec![
        (format!("{prefix}.wigner_to_delta"), record(to_delta)),
        (format!("{prefix}.delta_to_wigner"), record(to_wigner)),
        (format!("{prefix}.round_trip"), record(rt)),
    ];
    if refined {
        let dev = last[0].max_abs_diff(&Operator::identity(space))?;
        out.push(("weyl.quantize_identity".into(), Measurement::value(dev).with_detail(grids)));
    } else {
        let lhs = &last[0];
        let f = complex_forward(&gaussian)?;
        let rhs = maps.integrate_delta_products(&f.scale(C64::new(1.0 / (PI * PI), 0.0)))?;
        out.push(("weyl.function_correspondence".into(), record(deviation(&rhs, lhs)?)));
    }
    Ok(out)
}

fn real_pair(_: &Context) -> Result<Measurements, Error> {
    let grid = ComplexGrid::plane(121, 6.0)?;
    let h = GridFunction::from_plane_fn(grid, |z| C64::new((-(z - C64::new(0.2, -0.3)).norm_sqr()).exp(), 0.0))?;
    let back = real_inverse(&real_forward(&h)?)?;
    Ok(vec![m("xform.real_round_trip", back.interior_max_abs_diff(&h)?), m("xform.real_parseval", parseval_gap(&h)?)])
}

fn complex_pair(_: &Context) -> Result<Measurements, Error> {
    let grid = ComplexGrid::planes(33, 4.0)?;
    let d = GridFunction::from_planes_fn(grid, |nu, mu| {
        C64::new((-(nu - C64::new(0.2, 0.1)).norm_sqr() - (mu - C64::new(-0.1, 0.2)).norm_sqr()).exp(), 0.0)
    })?;
    let back = complex_inverse(&complex_forward(&d)?)?;
    Ok(vec![
        m("xform.complex_round_trip", back.interior_max_abs_diff(&d)?),
        m("xform.complex_parseval", parseval_gap(&d)?),
    ])
}

fn kernel(_: &Context) -> Result<Measurements, Error> {
    let z = C64::new(0.0, 0.0);
    let wide = ComplexGrid::planes(321, 10.0)?;
    let narrow = ComplexGrid::planes(161, 5.0)?;
    let e_wide = (kernel_normalization(&wide, z, z)? - 1.0).norm();
    let e_narrow = (kernel_normalization(&narrow, z, z)? - 1.0).norm();
    Ok(vec![
        ("xform.kernel_normalization".into(), Measurement::value(e_wide).with_detail("G=321 L=10")),
        ("aux.kernel_narrow".into(), Measurement::value(e_narrow).with_detail("G=161 L=5")),
    ])
}

fn gaussian(_: &Context) -> Result<Measurements, Error> {
    let grid = ComplexGrid::plane(81, 8.0)?;
    let mut worst: f64 = 0.0;
    for zeta in [C64::new(-1.0, 0.0), C64::new(-2.0, 0.5), C64::new(-0.7, -0.3)] {
        let (q, c) = gaussian_integral(zeta, C64::new(0.2, 0.1), C64::new(-0.1, 0.3), &grid)?;
        worst = worst.max((q - c).norm() / c.norm().max(1.0));
    }
    Ok(vec![m("xform.gaussian_integral", worst)])
}

/// Twenty fixed complex sample pairs spread over `|t|, |s| < 2`.
pub fn hermite_samples() -> Vec<(C64, C64)> {
    (0..20)
        .map(|k| {
            let a = k as f64 * 2.399963229728653;
            let r = 0.3 + 1.6 * ((k as f64 + 0.5) / 20.0).sqrt();
            (C64::from_polar(r, a), C64::from_polar(2.0 - r * 0.8, 1.3 * a + 0.7))
        })
        .collect()
}

fn hermite(ctx: &Context) -> Result<Measurements, Error> {
    let mut recurrence: f64 = 0.0;
    for (t, s) in hermite_samples() {
        for mm in 0..8 {
            for r in 0..=8 {
                let h = hermite2(mm, r, t, s)?;
                let lower = if r == 0 { C64::new(0.0, 0.0) } else { hermite2(mm, r - 1, t, s)? * r as f64 };
                let lhs = hermite2(mm + 1, r, t, s)?;
                let scale = lhs.norm().max((t * h).norm()).max(1.0);
                recurrence = recurrence.max((lhs - (t * h - lower)).norm() / scale);
            }
        }
    }
    let grid = ctx.config.hermite_grid.plane();
    let mut integral: f64 = 0.0;
    for (s, t) in [(0.0, 0.0), (0.4, -0.3), (-0.5, 0.6)] {
        for mm in 0..=2 {
            for r in 0..=2 {
                integral = integral.max(hermite_integral_check(mm, r, s, t, &grid)?.deviation);
            }
        }
    }
    Ok(vec![m("ordering.hermite_recurrence", recurrence), m("ordering.hermite_integral", integral)])
}

fn conversions(ctx: &Context) -> Result<Measurements, Error> {
    let c = &ctx.config;
    let oracle = ctx.oracle_maps()?;
    let field = WeylMaps::new(FockSpace::new(c.block_level)?, c.inner.plane())?;
    let setup = OrderingSetup {
        oracle,
        field: &field,
        symbol_grid: c.symbol_grid.planes(),
        power_space: FockSpace::new(c.cutoff)?,
    };
    let reports = ordering_reports(&setup, &ORDERING_PAIRS)?;
    let mut out = Vec::new();
    for (&(n, mm), pair) in ORDERING_PAIRS.iter().zip(&reports) {
        for e in pair {
            out.push((
                conversion_name(n, mm, e.order),
                Measurement::value(e.operator_deviation).with_detail(format!("oracle fit residual {:.2e}", e.oracle.residual)),
            ));
            let worst = e.coefficients.iter().map(|k| (k.paper - k.oracle).norm() / (1.0 + k.oracle.norm())).fold(0.0, f64::max);
            let off = e.coefficients.iter().filter(|k| !k.matches).count();
            out.push((
                paper_name(n, mm, e.order),
                Measurement::value(worst).with_detail(format!("{off} of {} coefficients differ", e.coefficients.len())),
            ));
        }
    }
    Ok(out)
}

/// Every name a task or derived check may look up.
pub fn known_outputs() -> BTreeMap<String, Suite> {
    tasks(&Suite::ALL).into_iter().flat_map(|t| t.outputs.into_iter().map(move |n| (n, t.suite))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_size_is_published_constant() {
        assert_eq!(catalog().len(), CATALOG_SIZE);
    }

    #[test]
    fn names_are_unique_and_covered() {
        let cat = catalog();
        let mut names: Vec<_> = cat.iter().map(|c| c.name.clone()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), cat.len());
        let outputs = known_outputs();
        let derived: Vec<_> = derived(&Suite::ALL).into_iter().map(|d| d.name).collect();
        for c in &cat {
            assert!(outputs.contains_key(&c.name) || derived.contains(&c.name), "{}", c.name);
        }
        for d in super::derived(&Suite::ALL) {
            for i in &d.inputs {
                assert!(outputs.contains_key(i), "{i}");
            }
        }
    }

    #[test]
    fn catalog_follows_suite_order() {
        let cat = catalog();
        assert!(cat.windows(2).all(|w| w[0].suite <= w[1].suite));
    }
}
