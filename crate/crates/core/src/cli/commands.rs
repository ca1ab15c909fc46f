use super::cache::Cache;
use super::config::{FunctionSpec, RunConfig};
use super::report::{Cell, ExperimentReport};
use crate::besov::{
    besov_double_integral_mc, besov_partial_sum, interval_trace_check, jump_kernel_ci, sg_beta_star,
    sg_monotone_limit, walkdim_estimate, BesovForm, BesovParams, GraphPointFunction, JumpKernelParams,
    McParams, PointFunction, ScSeparableFn,
};
use crate::energy::{
    cell_average_corners, kigami_energy_en, sc_pointwise_energy_dn, sg_graph_energy_an,
    sg_pointwise_energy_bn, sg_scaled_graph_energy, VertexFunction,
};
use crate::error::{invalid, Error, Result};
use crate::geometry::{cell_graph, FractalKind, VertexGraph};
use crate::harmonic::{
    cantor_strip_energy, f_of_x, harnack_trials, sc_good_function, HarnackBall, SgHarmonic,
};
use crate::network::{rho_estimate, sc_rnv, sg_cell_resistance};
use crate::scalar::Scalar;
use crate::walk::{
    boundary_hit_distribution, ctrw_lifetime, green_oo_exact, green_oo_mc, hitting_bracket,
};
use rand::{Rng, SeedableRng};
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Experiment {
    Resistance,
    Walkdim,
    Energy,
    Goodfn,
    Harnack,
    Besov,
    Mosco,
    Walk,
    Trace,
    Kernel,
}

impl Experiment {
    pub fn parse(s: &str) -> Result<Experiment> {
        <Experiment as clap::ValueEnum>::from_str(s, true)
            .map_err(|_| Error::InvalidArgument(format!("unknown experiment '{s}'")))
    }

    pub fn id(self) -> &'static str {
        match self {
            Experiment::Resistance => "resistance",
            Experiment::Walkdim => "walkdim",
            Experiment::Energy => "energy",
            Experiment::Goodfn => "goodfn",
            Experiment::Harnack => "harnack",
            Experiment::Besov => "besov",
            Experiment::Mosco => "mosco",
            Experiment::Walk => "walk",
            Experiment::Trace => "trace",
            Experiment::Kernel => "kernel",
        }
    }
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    cache: &'a Cache,
}

impl Ctx<'_> {
    fn graph(&self, kind: FractalKind, n: usize) -> Result<VertexGraph> {
        let cap = self.cfg.level_cap.unwrap_or_else(|| kind.default_level_cap());
        Ok(self.cache.vertex_graph(kind, n, cap)?.0)
    }

    fn levels(&self, min: usize) -> Result<std::ops::RangeInclusive<usize>> {
        let (a, b) = self.cfg.levels;
        if a < min {
            return invalid(format!("levels must start at {min} or later"));
        }
        Ok(a..=b)
    }

    fn function_on(&self, f: &FunctionSpec, g: &VertexGraph) -> Result<VertexFunction<f64>> {
        if f.kind() != g.kind {
            return invalid(format!("function {f} does not live on the {}", g.kind));
        }
        match f {
            FunctionSpec::Harmonic(b) => SgHarmonic::new(b[0], b[1], b[2]).on_graph(g),
            FunctionSpec::Fx => Ok(f_of_x(g)?.to_f64()),
            FunctionSpec::GoodFn => Ok(sc_good_function(g, &self.cfg.solver())?.u),
        }
    }
}

/// Function used when the configured one lives on the other fractal.
fn function_for(cfg: &RunConfig, kind: FractalKind) -> FunctionSpec {
    if cfg.function.kind() == kind {
        cfg.function.clone()
    } else if kind == FractalKind::SC {
        FunctionSpec::Fx
    } else {
        FunctionSpec::Harmonic([0.0, 1.0, 0.0])
    }
}

pub fn run_experiment(e: Experiment, cfg: &RunConfig, cache: &Cache) -> Result<ExperimentReport> {
    cfg.validate()?;
    let ctx = Ctx { cfg, cache };
    match e {
        Experiment::Resistance => resistance(&ctx),
        Experiment::Walkdim => walkdim(&ctx),
        Experiment::Energy => energy(&ctx),
        Experiment::Goodfn => goodfn(&ctx),
        Experiment::Harnack => harnack(&ctx),
        Experiment::Besov => besov(&ctx),
        Experiment::Mosco => mosco(&ctx),
        Experiment::Walk => walk(&ctx),
        Experiment::Trace => trace(&ctx),
        Experiment::Kernel => kernel(&ctx),
    }
}

fn resistance(ctx: &Ctx) -> Result<ExperimentReport> {
    let kind = ctx.cfg.kind;
    let mut rows = Vec::new();
    let mut seen: Vec<(usize, f64)> = Vec::new();
    for n in ctx.levels(1)? {
        let r = match kind {
            FractalKind::SG => {
                if n > ctx.cfg.cap() {
                    return Err(Error::LevelCap { level: n, cap: ctx.cfg.cap() });
                }
                sg_cell_resistance(n, 0, (3usize.pow(n as u32) - 1) / 2)?.value
            }
            FractalKind::SC => sc_rnv(&ctx.graph(kind, n)?, &ctx.cfg.solver())?.value,
        };
        let ratio = seen.last().filter(|p| p.0 + 1 == n).map(|p| r / p.1);
        seen.push((n, r));
        let fit: Vec<(usize, f64)> = seen.iter().copied().filter(|p| p.0 >= 2).collect();
        let rho = (fit.len() >= 3).then(|| rho_estimate(&fit)).transpose()?.map(|e| e.rho_hat);
        rows.push(vec![n.into(), r.into(), ratio.into(), rho.into()]);
    }
    Ok(ExperimentReport::table("resistance", ctx.cfg, &["n", "RnV", "ratio", "rho_hat"], rows))
}

fn walkdim(ctx: &Ctx) -> Result<ExperimentReport> {
    let f = ctx.cfg.function.clone();
    let kind = f.kind();
    let mut rows = Vec::new();
    let mut seen: Vec<(usize, f64)> = Vec::new();
    for n in ctx.levels(1)? {
        let g = ctx.graph(kind, n)?;
        let e = match &f {
            FunctionSpec::Harmonic(b) => sg_pointwise_energy_bn(&g, &SgHarmonic::new(b[0], b[1], b[2]).on_graph(&g)?)?,
            FunctionSpec::GoodFn => sc_good_function(&g, &ctx.cfg.solver())?.energy,
            FunctionSpec::Fx => sc_pointwise_energy_dn(&g, &f_of_x(&g)?)?.to_f64(),
        };
        let ratio = seen.last().filter(|p| p.0 + 1 == n).map(|p| e / p.1);
        seen.push((n, e));
        // SC fits skip level 1, as the resistance fit does.
        let min = if kind == FractalKind::SC { 2 } else { 1 };
        let fit: Vec<(usize, f64)> = seen.iter().copied().filter(|p| p.0 >= min).collect();
        let beta = (fit.len() >= 3).then(|| walkdim_estimate(&fit, kind)).transpose()?;
        rows.push(vec![n.into(), e.into(), ratio.into(), beta.into()]);
    }
    Ok(ExperimentReport::table("walkdim", ctx.cfg, &["n", "energy", "ratio", "beta_hat"], rows))
}

fn energy(ctx: &Ctx) -> Result<ExperimentReport> {
    let kind = ctx.cfg.kind;
    let f = function_for(ctx.cfg, kind);
    let mut rows = Vec::new();
    let mut push = |n: usize, name: &str, v: f64| rows.push(vec![n.into(), Cell::Text(name.into()), v.into()]);
    for n in ctx.levels(0)? {
        let g = ctx.graph(kind, n)?;
        match &f {
            FunctionSpec::Harmonic(b) => {
                let u = SgHarmonic::new(b[0], b[1], b[2]).on_graph(&g)?;
                push(n, "B_n", sg_pointwise_energy_bn(&g, &u)?);
                push(n, "E_n", kigami_energy_en(&g, &u)?);
                if n >= 1 {
                    let cg = cell_graph(kind, n)?;
                    let pn = cell_average_corners(&g, &u)?;
                    push(n, "A_n", sg_graph_energy_an(&cg, &pn)?);
                    push(n, "G_n", sg_scaled_graph_energy(&cg, &pn)?);
                }
            }
            FunctionSpec::Fx => {
                push(n, "D_n", sc_pointwise_energy_dn(&g, &f_of_x(&g)?)?.to_f64());
                push(n, "strip_D_n", cantor_strip_energy(&g)?.to_f64());
            }
            FunctionSpec::GoodFn => {
                if n >= 1 {
                    let gf = sc_good_function(&g, &ctx.cfg.solver())?;
                    push(n, "D_n", gf.energy);
                    push(n, "RnV", gf.resistance);
                }
            }
        }
    }
    Ok(ExperimentReport::table("energy", ctx.cfg, &["level", "functional", "value"], rows))
}

fn goodfn(ctx: &Ctx) -> Result<ExperimentReport> {
    let mut rows = Vec::new();
    let mut last = None;
    for n in ctx.levels(1)? {
        let g = ctx.graph(FractalKind::SC, n)?;
        let gf = sc_good_function(&g, &ctx.cfg.solver())?;
        rows.push(vec![n.into(), gf.resistance.into(), gf.energy.into(), gf.residual.into()]);
        last = Some((g, gf));
    }
    let mut r = ExperimentReport::table("goodfn", ctx.cfg, &["n", "RnV", "energy", "residual"], rows);
    if let Some((g, gf)) = last {
        let vertices: Vec<_> = (0..g.num_vertices())
            .map(|v| {
                let (x, y) = g.coords_f64(v);
                json!([x, y, gf.u.values[v]])
            })
            .collect();
        r.extras.push(("values".into(), json!({"level": gf.level, "vertices": vertices})));
    }
    Ok(r)
}

fn harnack(ctx: &Ctx) -> Result<ExperimentReport> {
    let ball = HarnackBall::standard();
    let mut rows = Vec::new();
    for n in ctx.levels(1)? {
        let g = ctx.graph(FractalKind::SC, n)?;
        let (max, mean) = harnack_trials(&g, &ball, ctx.cfg.trials, ctx.cfg.seed.wrapping_add(n as u64))?;
        rows.push(vec![n.into(), ctx.cfg.trials.into(), max.into(), mean.into()]);
    }
    Ok(ExperimentReport::table("harnack", ctx.cfg, &["n", "trials", "max_ratio", "mean_ratio"], rows))
}

fn default_betas(cfg: &RunConfig, d: &[f64]) -> Vec<f64> {
    if cfg.beta_grid.is_empty() {
        d.to_vec()
    } else {
        cfg.beta_grid.clone()
    }
}

fn tail_bound(terms: &[f64]) -> f64 {
    match terms {
        [.., a, b] if *a > 0.0 && b / a < 1.0 => b * (b / a) / (1.0 - b / a),
        [.., b] if *b == 0.0 => 0.0,
        _ => f64::INFINITY,
    }
}

fn besov(ctx: &Ctx) -> Result<ExperimentReport> {
    let kind = ctx.cfg.kind;
    let f = function_for(ctx.cfg, kind);
    let n = ctx.cfg.levels.1;
    if n == 0 {
        return invalid("besov needs a truncation level of at least 1");
    }
    let g = ctx.graph(kind, n)?;
    let u = ctx.function_on(&f, &g)?;
    let harmonic = match &f {
        FunctionSpec::Harmonic(b) => Some(SgHarmonic::new(b[0], b[1], b[2])),
        _ => None,
    };
    let sep = ScSeparableFn { a: 1.0, b: 0.0 };
    let on_graph = GraphPointFunction { graph: &g, u: &u };
    let pf: &dyn PointFunction = match (&f, &harmonic) {
        (_, Some(h)) => h,
        (FunctionSpec::Fx, _) => &sep,
        _ => &on_graph,
    };
    let depth = ctx.cfg.mc_depth.unwrap_or(n);
    let mut rows = Vec::new();
    for beta in default_betas(ctx.cfg, &[1.9, 2.0, 2.1]) {
        let s = besov_partial_sum(&g, &u, &BesovParams { beta, n_max: n, kind, form: BesovForm::Pointwise })?;
        let mc = besov_double_integral_mc(pf, &McParams::new(kind, beta, depth, ctx.cfg.samples, ctx.cfg.seed))?;
        rows.push(vec![
            beta.into(),
            s.value.into(),
            tail_bound(&s.terms).into(),
            mc.estimate.into(),
            mc.stderr.into(),
            (s.value / mc.estimate).into(),
            (s.diverging || mc.may_diverge).into(),
        ]);
    }
    Ok(ExperimentReport::table(
        "besov",
        ctx.cfg,
        &["beta", "value", "tail_bound", "mc", "mc_stderr", "ratio", "may_diverge"],
        rows,
    ))
}

fn mosco(ctx: &Ctx) -> Result<ExperimentReport> {
    let b = match function_for(ctx.cfg, FractalKind::SG) {
        FunctionSpec::Harmonic(b) => b,
        _ => unreachable!("SG functions are harmonic"),
    };
    let h = SgHarmonic::new(b[0], b[1], b[2]);
    let mut kig = Vec::new();
    for n in 1..=ctx.cfg.levels.1.max(1) {
        let g = ctx.graph(FractalKind::SG, n)?;
        kig.push(kigami_energy_en(&g, &h.on_graph(&g)?)?);
    }
    let (lo, hi) = (FractalKind::SG.alpha(), sg_beta_star());
    let grid: Vec<f64> = (1..=20).map(|k| lo + (hi - lo) * k as f64 / 21.0).collect();
    let grid = default_betas(ctx.cfg, &grid);
    let rows = sg_monotone_limit(&kig, &grid)?
        .into_iter()
        .map(|p| vec![p.beta.into(), p.lambda.into(), p.value.into(), p.tail.into()])
        .collect();
    Ok(ExperimentReport::table("mosco", ctx.cfg, &["beta", "lambda", "value", "tail_bound"], rows))
}

fn walk(ctx: &Ctx) -> Result<ExperimentReport> {
    let p = ctx.cfg.walk_params();
    let cut = ctx.cfg.depth_cut;
    let hb = hitting_bracket(&p, cut)?;
    let mut f = Vec::new();
    for s in ["", "0", "01", "012", "0121"] {
        let w = crate::Word::parse(FractalKind::SG, s)?;
        if w.level() < cut {
            let b = hb.f(&w)?;
            f.push(json!({"x": w.to_string(), "lower": b.lower, "upper": b.upper, "target": p.lambda.powi(w.level() as i32)}));
        }
    }
    let (lo, hi) = green_oo_exact(&p, cut)?;
    let g = green_oo_mc(&p)?;
    let hits = boundary_hit_distribution(&p, ctx.cfg.prefix_level)?;
    let life = ctrw_lifetime(&p)?;
    let v = json!({
        "lambda": p.lambda,
        "c": p.c,
        "G_oo": {"exact_lo": lo, "exact_hi": hi, "mc": g.mean, "stderr": g.stderr, "capped": g.capped},
        "F": f,
        "hit_dist": {"m": hits.m, "freqs": hits.freqs, "capped": hits.capped},
        "lifetime": {"mean": life.mean, "stderr": life.stderr, "closed_form": 1.0 / (3.0 * (1.0 - p.lambda) * (1.0 - p.c))},
    });
    Ok(ExperimentReport::tree("walk", ctx.cfg, v))
}

fn trace(ctx: &Ctx) -> Result<ExperimentReport> {
    let n = ctx.cfg.levels.1;
    let g = ctx.graph(FractalKind::SG, n)?;
    let u = ctx.function_on(&function_for(ctx.cfg, FractalKind::SG), &g)?;
    let alpha = FractalKind::SG.alpha();
    let mut rows = Vec::new();
    for beta in default_betas(ctx.cfg, &[1.7, 1.9, 2.1, 2.3]) {
        let t = interval_trace_check(&g, &u, beta)?;
        rows.push(vec![
            beta.into(),
            (beta - alpha + 1.0).into(),
            t.sg_seminorm.into(),
            t.interval_seminorm.into(),
            t.holds.into(),
        ]);
    }
    Ok(ExperimentReport::table("trace", ctx.cfg, &["beta1", "beta2", "sg_seminorm", "interval_seminorm", "holds"], rows))
}

fn kernel(ctx: &Ctx) -> Result<ExperimentReport> {
    let beta_i = ctx.cfg.beta_grid.first().copied().unwrap_or(2.2);
    let p = JumpKernelParams { i: ctx.cfg.kernel_i, delta: ctx.cfg.delta, gamma: ctx.cfg.gamma, beta_i, phi: None };
    let phi = p.phi()?;
    let depth = p.required_depth()?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
    let (mut cmax, mut amin, mut amax, mut nonzero) = (0.0f64, f64::INFINITY, 0.0f64, 0usize);
    let pairs = ctx.cfg.samples.min(100_000);
    for k in 0..pairs {
        let mut x: Vec<u8> = (0..depth).map(|_| rng.random_range(0..3)).collect();
        let mut y: Vec<u8> = (0..depth).map(|_| rng.random_range(0..3)).collect();
        if k % 2 == 0 {
            // Place the pair in K^{(i)}_{p,n} x K^{(i)}_{q,n} for a random level n.
            let n = rng.random_range(1..=phi);
            let run = p.gamma * n * p.i;
            y[..n].copy_from_slice(&x[..n].to_vec());
            let (j, q) = (rng.random_range(0..3u8), rng.random_range(0..3u8));
            x[n..n + run].iter_mut().for_each(|d| *d = j);
            y[n..n + run].iter_mut().for_each(|d| *d = q);
        }
        if x == y {
            continue;
        }
        let (c, a) = jump_kernel_ci(&x, &y, &p)?;
        if c > 0.0 {
            nonzero += 1;
        }
        cmax = cmax.max(c);
        amin = amin.min(a);
        amax = amax.max(a);
    }
    let rows = vec![vec![
        p.i.into(),
        phi.into(),
        depth.into(),
        pairs.into(),
        nonzero.into(),
        cmax.into(),
        amin.into(),
        amax.into(),
    ]];
    Ok(ExperimentReport::table(
        "kernel",
        ctx.cfg,
        &["i", "phi", "depth", "pairs", "nonzero", "ci_max", "ai_min", "ai_max"],
        rows,
    ))
}
