//! Scene files: a surface (or an atlas of charts), a region and a list of
//! analysis tasks. The format is TOML; `docs/scene-format.md` has the grammar.

mod output;
mod run;

pub use output::{format_float, to_json, Svg};
pub use run::{run_scene, run_scene_text, RunOptions, RunOutcome, EXIT_NUMERIC, EXIT_OK, EXIT_VALIDATION};

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use toml::{Table, Value};

use crate::error::Error;
use crate::fields::AtlasChart;
use crate::geometry::DEFAULT_TOL;
use crate::jets::{Convention, Domain, SurfaceChart};

pub const DEFAULT_RESOLUTION: usize = 64;

/// A problem found while reading a scene, with the key path it refers to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Seeds {
    Points(Vec<(f64, f64)>),
    Circle { center: (f64, f64), radius: f64, n: usize },
}

impl Seeds {
    pub fn points(&self) -> Vec<(f64, f64)> {
        match self {
            Seeds::Points(p) => p.clone(),
            Seeds::Circle { center, radius, n } => (0..*n)
                .map(|k| {
                    let t = std::f64::consts::TAU * k as f64 / *n as f64;
                    (center.0 + radius * t.cos(), center.1 + radius * t.sin())
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TaskKind {
    ClassifyGrid,
    Discriminant,
    AsymptoticLines { seeds: Seeds, step: f64, max_steps: usize },
    InflectionReport { separatrix_radius: Option<f64> },
    UmbilicReport,
    IndexReport { chi: i64 },
    WintgenScan,
}

impl TaskKind {
    pub fn tag(&self) -> &'static str {
        match self {
            TaskKind::ClassifyGrid => "classify-grid",
            TaskKind::Discriminant => "discriminant",
            TaskKind::AsymptoticLines { .. } => "asymptotic-lines",
            TaskKind::InflectionReport { .. } => "inflection-report",
            TaskKind::UmbilicReport => "umbilic-report",
            TaskKind::IndexReport { .. } => "index-report",
            TaskKind::WintgenScan => "wintgen-scan",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Task {
    /// Stem of the output files.
    pub name: String,
    pub kind: TaskKind,
    pub resolution: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative zero tolerance of the point classification and the inflection analysis.
    pub classification: f64,
    /// Loop radius for indices of isolated inflections.
    pub index_radius: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            classification: DEFAULT_TOL,
            index_radius: 0.05,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Scene {
    pub name: String,
    pub charts: Vec<AtlasChart>,
    pub resolution: usize,
    pub tasks: Vec<Task>,
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
    /// Hex SHA-256 of the scene text.
    pub hash: String,
}

impl Scene {
    /// Parse and validate; every problem is reported.
    pub fn parse(text: &str) -> Result<Scene, Vec<Diagnostic>> {
        let mut r = Reader::default();
        let scene = r.scene(text);
        match scene {
            Some(s) if r.diags.is_empty() => Ok(s),
            _ => Err(r.diags),
        }
    }

    pub fn load(path: &Path) -> std::io::Result<Result<Scene, Vec<Diagnostic>>> {
        let text = std::fs::read_to_string(path)?;
        Ok(Scene::parse(&text))
    }

    pub fn is_atlas(&self) -> bool {
        self.charts.len() > 1
    }
}

/// Diagnostics for a scene file; empty when the scene is valid.
pub fn validate_scene(path: &Path) -> std::io::Result<Vec<Diagnostic>> {
    Ok(match Scene::load(path)? {
        Ok(_) => Vec::new(),
        Err(d) => d,
    })
}

pub fn scene_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Default)]
struct Reader {
    diags: Vec<Diagnostic>,
}

const TOP_KEYS: &[&str] = &["name", "output", "resolution", "surface", "region", "chart", "task", "tolerances"];
const SURFACE_KEYS: &[&str] = &[
    "kind",
    "convention",
    "F",
    "phi",
    "psi",
    "params",
    "defs",
    "components",
    "eta",
    "zeta",
    "alpha",
    "beta",
    "extra",
    "domain",
];
const TASK_KINDS: &[&str] = &[
    "classify-grid",
    "discriminant",
    "asymptotic-lines",
    "inflection-report",
    "umbilic-report",
    "index-report",
    "wintgen-scan",
];

impl Reader {
    fn err(&mut self, location: impl Into<String>, message: impl Into<String>) {
        self.diags.push(Diagnostic {
            location: location.into(),
            message: message.into(),
        });
    }

    fn unknown_keys(&mut self, t: &Table, path: &str, allowed: &[&str]) {
        for k in t.keys() {
            if !allowed.contains(&k.as_str()) {
                self.err(join(path, k), "unknown key");
            }
        }
    }

    fn string(&mut self, t: &Table, path: &str, key: &str, required: bool) -> Option<String> {
        match t.get(key) {
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => {
                self.err(join(path, key), "expected a string");
                None
            }
            None => {
                if required {
                    self.err(join(path, key), "missing");
                }
                None
            }
        }
    }

    fn number(&mut self, v: &Value, loc: &str) -> Option<f64> {
        match v {
            Value::Float(f) if f.is_finite() => Some(*f),
            Value::Integer(i) => Some(*i as f64),
            _ => {
                self.err(loc, "expected a finite number");
                None
            }
        }
    }

    fn float(&mut self, t: &Table, path: &str, key: &str, required: bool) -> Option<f64> {
        match t.get(key) {
            Some(v) => self.number(v, &join(path, key)),
            None => {
                if required {
                    self.err(join(path, key), "missing");
                }
                None
            }
        }
    }

    fn integer(&mut self, t: &Table, path: &str, key: &str, min: i64) -> Option<i64> {
        match t.get(key) {
            Some(Value::Integer(i)) if *i >= min => Some(*i),
            Some(_) => {
                self.err(join(path, key), format!("expected an integer ≥ {min}"));
                None
            }
            None => None,
        }
    }

    fn numbers(&mut self, v: &Value, loc: &str, len: Option<usize>) -> Option<Vec<f64>> {
        let Value::Array(a) = v else {
            self.err(loc, "expected an array of numbers");
            return None;
        };
        if let Some(n) = len {
            if a.len() != n {
                self.err(loc, format!("expected {n} numbers, found {}", a.len()));
                return None;
            }
        }
        let out: Vec<Option<f64>> = a.iter().enumerate().map(|(i, x)| self.number(x, &format!("{loc}[{i}]"))).collect();
        out.into_iter().collect()
    }

    fn pair(&mut self, v: &Value, loc: &str) -> Option<(f64, f64)> {
        self.numbers(v, loc, Some(2)).map(|p| (p[0], p[1]))
    }

    fn domain(&mut self, v: &Value, loc: &str) -> Option<Domain> {
        let Value::Table(t) = v else {
            self.err(loc, "expected a table with x and y ranges");
            return None;
        };
        self.unknown_keys(t, loc, &["x", "y"]);
        let x = match t.get("x") {
            Some(v) => self.pair(v, &join(loc, "x")),
            None => {
                self.err(join(loc, "x"), "missing");
                None
            }
        };
        let y = match t.get("y") {
            Some(v) => self.pair(v, &join(loc, "y")),
            None => {
                self.err(join(loc, "y"), "missing");
                None
            }
        };
        let (x, y) = (x?, y?);
        match Domain::new(x, y) {
            Ok(d) => Some(d),
            Err(e) => {
                self.err(loc, e.to_string());
                None
            }
        }
    }

    fn scene(&mut self, text: &str) -> Option<Scene> {
        let root: Table = match text.parse() {
            Ok(t) => t,
            Err(e) => {
                self.err("scene", format!("TOML syntax: {}", e.to_string().trim_end()));
                return None;
            }
        };
        self.unknown_keys(&root, "", TOP_KEYS);
        let name = self.string(&root, "", "name", false).unwrap_or_else(|| "scene".into());
        let output = self.string(&root, "", "output", false).map(PathBuf::from);
        let resolution = self.integer(&root, "", "resolution", 2).map(|r| r as usize).unwrap_or(DEFAULT_RESOLUTION);
        let tolerances = self.tolerances(&root);

        let mut charts = Vec::new();
        let mut charts_ok = true;
        let has_single = root.contains_key("surface") || root.contains_key("region");
        match (has_single, root.get("chart")) {
            (true, Some(_)) => self.err("chart", "use either [surface] with [region] or [[chart]] entries, not both"),
            (false, None) => self.err("surface", "missing (or give [[chart]] entries)"),
            (true, None) => {
                match self.single_chart(&root) {
                    Some(c) => charts.push(c),
                    None => charts_ok = false,
                }
            }
            (false, Some(Value::Array(list))) => {
                for (i, c) in list.iter().enumerate() {
                    let loc = format!("chart[{i}]");
                    if let Some(c) = self.atlas_chart(c, &loc) {
                        if charts.iter().any(|o: &AtlasChart| o.name == c.name) {
                            self.err(join(&loc, "name"), format!("duplicate chart name `{}`", c.name));
                        }
                        charts.push(c);
                    } else {
                        charts_ok = false;
                    }
                }
            }
            (false, Some(_)) => self.err("chart", "expected an array of tables ([[chart]])"),
        }

        let mut tasks = Vec::new();
        match root.get("task") {
            None => self.err("task", "no tasks given"),
            Some(Value::Array(list)) => {
                for (i, t) in list.iter().enumerate() {
                    let known = charts_ok.then_some(charts.as_slice());
                    if let Some(t) = self.task(t, &format!("task[{i}]"), resolution, known) {
                        tasks.push(t);
                    }
                }
            }
            Some(_) => self.err("task", "expected an array of tables ([[task]])"),
        }
        for i in 0..tasks.len() {
            if tasks[..i].iter().any(|t: &Task| t.name == tasks[i].name) {
                self.err(
                    format!("task[{i}]"),
                    format!("output name `{}` is used by an earlier task; set `name`", tasks[i].name),
                );
            }
        }
        Some(Scene {
            name,
            charts,
            resolution,
            tasks,
            tolerances,
            output,
            hash: scene_hash(text),
        })
    }

    fn tolerances(&mut self, root: &Table) -> Tolerances {
        let mut tol = Tolerances::default();
        match root.get("tolerances") {
            None => {}
            Some(Value::Table(t)) => {
                self.unknown_keys(t, "tolerances", &["classification", "index-radius"]);
                if let Some(v) = self.float(t, "tolerances", "classification", false) {
                    if v > 0.0 {
                        tol.classification = v;
                    } else {
                        self.err("tolerances.classification", "must be positive");
                    }
                }
                if let Some(v) = self.float(t, "tolerances", "index-radius", false) {
                    if v >= 1e-3 {
                        tol.index_radius = v;
                    } else {
                        self.err("tolerances.index-radius", "must be at least 1e-3");
                    }
                }
            }
            Some(_) => self.err("tolerances", "expected a table"),
        }
        tol
    }

    fn single_chart(&mut self, root: &Table) -> Option<AtlasChart> {
        let region = match root.get("region") {
            Some(v) => self.domain(v, "region"),
            None => {
                self.err("region", "missing");
                None
            }
        };
        let surface = match root.get("surface") {
            Some(Value::Table(t)) => self.surface(t, "surface", region),
            Some(_) => {
                self.err("surface", "expected a table");
                None
            }
            None => {
                self.err("surface", "missing");
                None
            }
        };
        let (chart, region) = (surface?, region?);
        self.region_inside("region", &chart, region);
        Some(AtlasChart {
            name: "main".into(),
            chart,
            region,
        })
    }

    fn atlas_chart(&mut self, v: &Value, loc: &str) -> Option<AtlasChart> {
        let Value::Table(t) = v else {
            self.err(loc, "expected a table");
            return None;
        };
        self.unknown_keys(t, loc, &["name", "surface", "region"]);
        let name = self.string(t, loc, "name", true);
        let region = match t.get("region") {
            Some(v) => self.domain(v, &join(loc, "region")),
            None => {
                self.err(join(loc, "region"), "missing");
                None
            }
        };
        let sloc = join(loc, "surface");
        let surface = match t.get("surface") {
            Some(Value::Table(s)) => self.surface(s, &sloc, region),
            _ => {
                self.err(&sloc, "missing or not a table");
                None
            }
        };
        let (name, chart, region) = (name?, surface?, region?);
        self.region_inside(&join(loc, "region"), &chart, region);
        Some(AtlasChart { name, chart, region })
    }

    fn region_inside(&mut self, loc: &str, chart: &SurfaceChart, region: Domain) {
        let d = chart.domain;
        if region.x.0 < d.x.0 || region.x.1 > d.x.1 || region.y.0 < d.y.0 || region.y.1 > d.y.1 {
            self.err(loc, "region must lie inside the surface domain");
        }
    }

    fn surface(&mut self, t: &Table, loc: &str, region: Option<Domain>) -> Option<SurfaceChart> {
        self.unknown_keys(t, loc, SURFACE_KEYS);
        let kind = self.string(t, loc, "kind", true)?;
        let convention = match self.string(t, loc, "convention", false).as_deref() {
            None | Some("standard") => Convention::Standard,
            Some("variant") => Convention::Variant,
            Some(other) => {
                self.err(join(loc, "convention"), format!("unknown convention `{other}` (standard | variant)"));
                Convention::Standard
            }
        };
        let domain = match t.get("domain") {
            Some(v) => self.domain(v, &join(loc, "domain")),
            None => region,
        }?;
        let zeta = |r: &mut Reader| match t.get("zeta") {
            Some(v) => r.numbers(v, &join(loc, "zeta"), Some(5)).map(|z| [z[0], z[1], z[2], z[3], z[4]]),
            None => {
                r.err(join(loc, "zeta"), "missing");
                None
            }
        };
        let extra = self.string(t, loc, "extra", false);
        let graph_only = |r: &mut Reader, c: Convention| {
            if c == Convention::Variant {
                r.err(join(loc, "convention"), format!("kind `{kind}` is always standard"));
            }
        };
        let built = match kind.as_str() {
            "generating-function" => {
                graph_only(self, convention);
                let f = self.string(t, loc, "F", true)?;
                SurfaceChart::generating_function(&f, domain)
            }
            "component-pair" => {
                let phi = self.string(t, loc, "phi", true);
                let psi = self.string(t, loc, "psi", true);
                SurfaceChart::component_pair(&phi?, &psi?, domain, convention)
            }
            "immersion" => {
                let params = match t.get("params") {
                    None => Some(["x".to_string(), "y".to_string()]),
                    Some(Value::Array(a)) if a.len() == 2 && a.iter().all(|v| v.is_str()) => {
                        Some([a[0].as_str().unwrap().to_string(), a[1].as_str().unwrap().to_string()])
                    }
                    Some(_) => {
                        self.err(join(loc, "params"), "expected two parameter names");
                        None
                    }
                };
                let defs = match t.get("defs") {
                    None => Some(Vec::new()),
                    Some(Value::Array(a)) => {
                        let mut out = Vec::new();
                        let mut ok = true;
                        for (i, d) in a.iter().enumerate() {
                            match d.as_array() {
                                Some(p) if p.len() == 2 && p.iter().all(|v| v.is_str()) => out.push((
                                    p[0].as_str().unwrap().to_string(),
                                    p[1].as_str().unwrap().to_string(),
                                )),
                                _ => {
                                    self.err(format!("{}[{i}]", join(loc, "defs")), "expected [name, expression]");
                                    ok = false;
                                }
                            }
                        }
                        ok.then_some(out)
                    }
                    Some(_) => {
                        self.err(join(loc, "defs"), "expected an array of [name, expression] pairs");
                        None
                    }
                };
                let components = match t.get("components") {
                    Some(Value::Array(a)) if a.len() == 4 && a.iter().all(|v| v.is_str()) => {
                        Some(a.iter().map(|v| v.as_str().unwrap().to_string()).collect::<Vec<_>>())
                    }
                    _ => {
                        self.err(join(loc, "components"), "expected four expressions");
                        None
                    }
                };
                let (params, defs, components) = (params?, defs?, components?);
                let defs: Vec<(&str, &str)> = defs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
                SurfaceChart::immersion(
                    [&params[0], &params[1]],
                    &defs,
                    [&components[0], &components[1], &components[2], &components[3]],
                    domain,
                    convention,
                )
            }
            "normal-form" => {
                graph_only(self, convention);
                let eta = self.float(t, loc, "eta", true);
                let zeta = zeta(self);
                SurfaceChart::normal_form(eta?, zeta?, extra.as_deref(), domain)
            }
            "umbilic-normal-form" => {
                graph_only(self, convention);
                let alpha = self.float(t, loc, "alpha", true);
                let beta = self.float(t, loc, "beta", true);
                let zeta = zeta(self);
                SurfaceChart::umbilic_normal_form(alpha?, beta?, zeta?, extra.as_deref(), domain)
            }
            other => {
                self.err(
                    join(loc, "kind"),
                    format!(
                        "unknown surface kind `{other}` (generating-function | component-pair | immersion | normal-form | umbilic-normal-form)"
                    ),
                );
                return None;
            }
        };
        match built {
            Ok(c) => Some(c),
            Err(e) => {
                let at = match &e {
                    Error::Parse { context, .. } => surface_key(loc, &kind, context),
                    _ => loc.to_string(),
                };
                self.err(at, e.to_string());
                None
            }
        }
    }

    fn task(&mut self, v: &Value, loc: &str, default_res: usize, charts: Option<&[AtlasChart]>) -> Option<Task> {
        let Value::Table(t) = v else {
            self.err(loc, "expected a table");
            return None;
        };
        let kind = self.string(t, loc, "kind", true)?;
        let mut allowed = vec!["kind", "name", "resolution"];
        let resolution = self.integer(t, loc, "resolution", 2).map(|r| r as usize).unwrap_or(default_res);
        let k = match kind.as_str() {
            "classify-grid" => TaskKind::ClassifyGrid,
            "discriminant" => TaskKind::Discriminant,
            "umbilic-report" => TaskKind::UmbilicReport,
            "wintgen-scan" => TaskKind::WintgenScan,
            "inflection-report" => {
                allowed.push("separatrix-radius");
                let r = self.float(t, loc, "separatrix-radius", false);
                if matches!(r, Some(r) if r <= 0.0) {
                    self.err(join(loc, "separatrix-radius"), "must be positive");
                }
                TaskKind::InflectionReport { separatrix_radius: r }
            }
            "index-report" => {
                allowed.push("chi");
                let chi = match t.get("chi") {
                    Some(Value::Integer(c)) => Some(*c),
                    Some(_) => {
                        self.err(join(loc, "chi"), "expected an integer Euler characteristic");
                        None
                    }
                    None => {
                        self.err(join(loc, "chi"), "index-report needs the Euler characteristic `chi` of the atlas");
                        None
                    }
                };
                TaskKind::IndexReport { chi: chi? }
            }
            "asymptotic-lines" => {
                allowed.extend(["seeds", "seed-circle", "step", "max-steps"]);
                let seeds = match (t.get("seeds"), t.get("seed-circle")) {
                    (Some(_), Some(_)) => {
                        self.err(loc, "give either seeds or seed-circle, not both");
                        None
                    }
                    (None, None) => {
                        self.err(join(loc, "seeds"), "asymptotic-lines needs seeds or seed-circle");
                        None
                    }
                    (Some(Value::Array(a)), None) => {
                        let pts: Vec<Option<(f64, f64)>> = a
                            .iter()
                            .enumerate()
                            .map(|(i, p)| self.pair(p, &format!("{}[{i}]", join(loc, "seeds"))))
                            .collect();
                        pts.into_iter().collect::<Option<Vec<_>>>().map(Seeds::Points)
                    }
                    (Some(_), None) => {
                        self.err(join(loc, "seeds"), "expected an array of [x, y] points");
                        None
                    }
                    (None, Some(Value::Table(c))) => {
                        let cl = join(loc, "seed-circle");
                        self.unknown_keys(c, &cl, &["center", "radius", "n"]);
                        let center = match c.get("center") {
                            Some(v) => self.pair(v, &join(&cl, "center")),
                            None => Some((0.0, 0.0)),
                        };
                        let radius = self.float(c, &cl, "radius", true);
                        if matches!(radius, Some(r) if r <= 0.0) {
                            self.err(join(&cl, "radius"), "must be positive");
                        }
                        let n = self.integer(c, &cl, "n", 1);
                        if n.is_none() && !c.contains_key("n") {
                            self.err(join(&cl, "n"), "missing");
                        }
                        Some(Seeds::Circle {
                            center: center?,
                            radius: radius?,
                            n: n? as usize,
                        })
                    }
                    (None, Some(_)) => {
                        self.err(join(loc, "seed-circle"), "expected a table with center, radius and n");
                        None
                    }
                };
                let step = self.float(t, loc, "step", false).unwrap_or(1e-3);
                if step <= 0.0 {
                    self.err(join(loc, "step"), "must be positive");
                }
                let max_steps = self.integer(t, loc, "max-steps", 1).unwrap_or(2000) as usize;
                if let (Some(s), Some(charts)) = (&seeds, charts) {
                    for (i, p) in s.points().iter().enumerate() {
                        if !charts.iter().any(|c| c.region.contains(p.0, p.1)) {
                            self.err(format!("{}[{i}]", join(loc, "seeds")), format!("seed ({}, {}) lies outside every region", p.0, p.1));
                        }
                    }
                }
                TaskKind::AsymptoticLines {
                    seeds: seeds?,
                    step,
                    max_steps,
                }
            }
            other => {
                self.err(
                    join(loc, "kind"),
                    format!("unknown task `{other}` ({})", TASK_KINDS.join(" | ")),
                );
                return None;
            }
        };
        self.unknown_keys(t, loc, &allowed);
        let name = self
            .string(t, loc, "name", false)
            .unwrap_or_else(|| k.tag().replace('-', "_"));
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            self.err(join(loc, "name"), "output names use letters, digits, `_` and `-`");
        }
        Some(Task {
            name,
            kind: k,
            resolution,
        })
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

/// Key path of the expression a parse error refers to.
fn surface_key(loc: &str, kind: &str, context: &str) -> String {
    match (kind, context) {
        ("immersion", c) if c.starts_with("component ") => {
            let k: usize = c["component ".len()..].parse().unwrap_or(1);
            format!("{}[{}]", join(loc, "components"), k - 1)
        }
        ("immersion", c) => format!("{} `{c}`", join(loc, "defs")),
        ("normal-form" | "umbilic-normal-form", _) => join(loc, "extra"),
        (_, c) => join(loc, c),
    }
}
