use crate::error::{invalid, Error, Result};
use crate::geometry::FractalKind;
use std::fmt::Write as _;
use std::path::PathBuf;

/// A test function selector, `harmonic:a,b,c` (SG), `goodfn` or `fx` (SC).
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionSpec {
    Harmonic([f64; 3]),
    GoodFn,
    Fx,
}

impl FunctionSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("harmonic:") {
            let v = parse_floats(rest)?;
            if v.len() != 3 {
                return invalid("harmonic needs three boundary values");
            }
            return Ok(FunctionSpec::Harmonic([v[0], v[1], v[2]]));
        }
        match s {
            "goodfn" => Ok(FunctionSpec::GoodFn),
            "fx" => Ok(FunctionSpec::Fx),
            _ => invalid(format!("unknown function '{s}'")),
        }
    }

    pub fn kind(&self) -> FractalKind {
        match self {
            FunctionSpec::Harmonic(_) => FractalKind::SG,
            _ => FractalKind::SC,
        }
    }
}

impl std::fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FunctionSpec::Harmonic([a, b, c]) => write!(f, "harmonic:{a},{b},{c}"),
            FunctionSpec::GoodFn => f.write_str("goodfn"),
            FunctionSpec::Fx => f.write_str("fx"),
        }
    }
}

/// Every tunable of a run. Loaded from `key = value` lines; flags override.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub kind: FractalKind,
    pub levels: (usize, usize),
    pub level_cap: Option<usize>,
    pub tol: f64,
    pub dense_max: usize,
    pub beta_grid: Vec<f64>,
    pub function: FunctionSpec,
    pub lambda: f64,
    pub c1: f64,
    pub c2: f64,
    pub c: f64,
    pub a: f64,
    pub samples: usize,
    pub mc_depth: Option<usize>,
    pub depth_cut: usize,
    pub prefix_level: usize,
    pub trials: usize,
    pub kernel_i: usize,
    pub delta: f64,
    pub gamma: usize,
    pub seed: u64,
    pub threads: usize,
    pub out: PathBuf,
    pub cache: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            kind: FractalKind::SG,
            levels: (1, 5),
            level_cap: None,
            tol: 1e-12,
            dense_max: 2000,
            beta_grid: Vec::new(),
            function: FunctionSpec::Harmonic([0.0, 1.0, 0.0]),
            lambda: 0.5,
            c1: 1.0,
            c2: 1.0,
            c: 0.25,
            a: 0.5,
            samples: 100_000,
            mc_depth: None,
            depth_cut: 12,
            prefix_level: 2,
            trials: 50,
            kernel_i: 1,
            delta: 0.5,
            gamma: 6,
            seed: 0,
            threads: 0,
            out: PathBuf::from("out"),
            cache: None,
        }
    }
}

fn parse_floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::InvalidArgument(format!("bad number '{t}'"))))
        .collect()
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad value '{v}' for {key}")))
}

pub fn parse_levels(v: &str) -> Result<(usize, usize)> {
    let v = v.trim();
    let (a, b) = match v.split_once("..") {
        Some((a, b)) => (parse_num::<usize>("levels", a)?, parse_num::<usize>("levels", b)?),
        None => {
            let n = parse_num::<usize>("levels", v)?;
            (n, n)
        }
    };
    if a > b {
        return invalid("empty level range");
    }
    Ok((a, b))
}

fn optional<T: std::str::FromStr>(key: &str, v: &str) -> Result<Option<T>> {
    if v.trim() == "none" {
        Ok(None)
    } else {
        parse_num(key, v).map(Some)
    }
}

impl RunConfig {
    /// Sets one key; unknown keys are errors.
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        let v = v.trim();
        match key.trim() {
            "kind" => self.kind = FractalKind::parse(v)?,
            "levels" => self.levels = parse_levels(v)?,
            "level_cap" => self.level_cap = optional(key, v)?,
            "tol" => self.tol = parse_num(key, v)?,
            "dense_max" => self.dense_max = parse_num(key, v)?,
            "beta_grid" => self.beta_grid = parse_floats(v)?,
            "function" => self.function = FunctionSpec::parse(v)?,
            "lambda" => self.lambda = parse_num(key, v)?,
            "c1" => self.c1 = parse_num(key, v)?,
            "c2" => self.c2 = parse_num(key, v)?,
            "c" => self.c = parse_num(key, v)?,
            "a" => self.a = parse_num(key, v)?,
            "samples" => self.samples = parse_num(key, v)?,
            "mc_depth" => self.mc_depth = optional(key, v)?,
            "depth_cut" => self.depth_cut = parse_num(key, v)?,
            "prefix_level" => self.prefix_level = parse_num(key, v)?,
            "trials" => self.trials = parse_num(key, v)?,
            "kernel_i" => self.kernel_i = parse_num(key, v)?,
            "delta" => self.delta = parse_num(key, v)?,
            "gamma" => self.gamma = parse_num(key, v)?,
            "seed" => self.seed = parse_num(key, v)?,
            "threads" => self.threads = parse_num(key, v)?,
            "out" => self.out = PathBuf::from(v),
            "cache" => self.cache = if v == "none" { None } else { Some(PathBuf::from(v)) },
            other => return invalid(format!("unknown config key '{other}'")),
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("line {}: expected key = value", i + 1)))?;
            c.set(k, v)?;
        }
        Ok(c)
    }

    pub fn serialize(&self) -> String {
        let opt = |o: Option<usize>| o.map_or("none".to_string(), |v| v.to_string());
        let grid: Vec<String> = self.beta_grid.iter().map(|b| b.to_string()).collect();
        let mut s = String::new();
        let mut put = |k: &str, v: String| writeln!(s, "{k} = {v}").unwrap();
        put("kind", self.kind.tag().into());
        put("levels", format!("{}..{}", self.levels.0, self.levels.1));
        put("level_cap", opt(self.level_cap));
        put("tol", self.tol.to_string());
        put("dense_max", self.dense_max.to_string());
        put("beta_grid", grid.join(","));
        put("function", self.function.to_string());
        put("lambda", self.lambda.to_string());
        put("c1", self.c1.to_string());
        put("c2", self.c2.to_string());
        put("c", self.c.to_string());
        put("a", self.a.to_string());
        put("samples", self.samples.to_string());
        put("mc_depth", opt(self.mc_depth));
        put("depth_cut", self.depth_cut.to_string());
        put("prefix_level", self.prefix_level.to_string());
        put("trials", self.trials.to_string());
        put("kernel_i", self.kernel_i.to_string());
        put("delta", self.delta.to_string());
        put("gamma", self.gamma.to_string());
        put("seed", self.seed.to_string());
        put("threads", self.threads.to_string());
        put("out", self.out.display().to_string());
        put("cache", self.cache.as_ref().map_or("none".into(), |p| p.display().to_string()));
        s
    }

    /// Upper end of the admissible beta range: `log 5 / log 2` on the SG and the
    /// bound `log(8 * 3/2) / log 3` implied by `rho <= 3/2` on the SC.
    pub fn beta_upper(kind: FractalKind) -> f64 {
        match kind {
            FractalKind::SG => crate::besov::sg_beta_star(),
            FractalKind::SC => 12f64.ln() / 3f64.ln(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return invalid("lambda must lie in (0, 1)");
        }
        if !(self.c > 0.0 && self.c < self.lambda) {
            return invalid("c must lie in (0, lambda)");
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0 && self.a > 0.0) {
            return invalid("C1, C2 and a must be positive");
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return invalid("tol must lie in (0, 1)");
        }
        let (lo, hi) = (self.kind.alpha(), Self::beta_upper(self.kind));
        if let Some(b) = self.beta_grid.iter().find(|&&b| !(b > lo && b < hi)) {
            return invalid(format!("beta {b} outside ({lo}, {hi}) for {}", self.kind));
        }
        if self.samples == 0 || self.trials == 0 {
            return invalid("samples and trials must be positive");
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return invalid("delta must lie in (0, 1]");
        }
        Ok(())
    }

    pub fn cap(&self) -> usize {
        self.level_cap.unwrap_or_else(|| self.kind.default_level_cap())
    }

    pub fn solver(&self) -> crate::network::SolverOptions {
        crate::network::SolverOptions { tol: self.tol, dense_max: self.dense_max, ..Default::default() }
    }

    pub fn walk_params(&self) -> crate::walk::WalkParams {
        crate::walk::WalkParams {
            c1: self.c1,
            c2: self.c2,
            c: self.c,
            seed: self.seed,
            samples: self.samples,
            ..crate::walk::WalkParams::new(self.lambda)
        }
    }
}
