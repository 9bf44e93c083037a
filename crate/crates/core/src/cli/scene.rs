//! Line-oriented scene files: `key [value] [k=v ...]`, one entry per line,
//! `#` starts a comment.
//!
//! ```text
//! surface chekanov r=1.0
//! refpoint arc=0 s=0.5
//! op index
//! grid rows=2048 cols=256
//! seed 0
//! ```

use crate::fibers::{classify_fiber, FiberClass, FiberSpec};
use crate::index::LoopPoint;
use crate::profile::{
    builtin_loop_n, seeded_loop, ArcShape, Builtin, Closure, ProfileArc, ProfileError, ProfileLoop,
    DEFAULT_SAMPLES, MIN_SAMPLES, P2,
};
use crate::surgery::seeded_admissible_loop;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SceneError {
    #[error("line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("invalid scene ({}): {msg}", keys.join(", "))]
    Validation { keys: Vec<String>, msg: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledArc {
    pub points: Vec<P2>,
    pub periodic: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceSpec {
    Builtin(Builtin),
    Fiber(FiberSpec),
    /// [`seeded_loop`].
    Seeded(u64),
    /// [`seeded_admissible_loop`].
    Admissible(u64),
    Sampled {
        closure: Closure,
        arcs: Vec<SampledArc>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Op {
    Index,
    Surgery,
    Plot,
}

impl Op {
    fn name(self) -> &'static str {
        match self {
            Op::Index => "index",
            Op::Surgery => "surgery",
            Op::Plot => "plot",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub surface: SurfaceSpec,
    pub refpoint: Option<LoopPoint>,
    pub ops: Vec<Op>,
    pub json_out: Option<String>,
    pub svg_out: Option<String>,
    /// Degree-oracle grid: total rows over the loop, columns over the orbit.
    pub rows: usize,
    pub cols: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Scene {
    pub fn new(surface: SurfaceSpec) -> Self {
        Scene {
            surface,
            refpoint: None,
            ops: Vec::new(),
            json_out: None,
            svg_out: None,
            rows: 2048,
            cols: 256,
            samples: DEFAULT_SAMPLES,
            seed: 0,
        }
    }

    /// The profile loop, or `None` for a fiber with `a != 0`.
    pub fn profile(&self) -> Result<Option<ProfileLoop>, ProfileError> {
        build_profile(&self.surface, self.samples)
    }
}

fn build_profile(spec: &SurfaceSpec, n: usize) -> Result<Option<ProfileLoop>, ProfileError> {
    Ok(Some(match spec {
        SurfaceSpec::Builtin(b) => builtin_loop_n(b, n)?,
        SurfaceSpec::Fiber(f) if f.a == 0.0 => crate::profile::level_curve(f.b, n)?,
        SurfaceSpec::Fiber(_) => return Ok(None),
        SurfaceSpec::Seeded(s) => seeded_loop(*s),
        SurfaceSpec::Admissible(s) => seeded_admissible_loop(*s),
        SurfaceSpec::Sampled { closure, arcs } => {
            let arcs = arcs
                .iter()
                .map(|a| {
                    let m = a.points.len() as f64;
                    let end = if a.periodic { m } else { m - 1.0 };
                    ProfileArc::new(
                        ArcShape::Sampled {
                            points: a.points.clone(),
                            periodic: a.periodic,
                        },
                        0.0,
                        end,
                        n,
                    )
                })
                .collect::<Result<Vec<_>, _>>()?;
            ProfileLoop::new(arcs, *closure)?
        }
    }))
}

struct Token<'a> {
    text: &'a str,
    col: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    col: s + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            col: s + 1,
        });
    }
    out
}

/// One parsed line: key, optional value and `k=v` parameters with columns.
struct Entry<'a> {
    line: usize,
    key: Token<'a>,
    value: Option<Token<'a>>,
    params: Vec<(Token<'a>, &'a str)>,
}

impl<'a> Entry<'a> {
    fn err(&self, col: usize, msg: impl Into<String>) -> SceneError {
        SceneError::Parse {
            line: self.line,
            col,
            msg: msg.into(),
        }
    }

    fn param(&self, name: &str) -> Option<(&Token<'a>, &'a str)> {
        self.params
            .iter()
            .find(|(k, _)| k.text == name)
            .map(|(k, v)| (k, *v))
    }

    fn f64_param(&self, name: &str, default: Option<f64>) -> Result<f64, SceneError> {
        match self.param(name) {
            Some((k, v)) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| {
                    self.err(
                        k.col + name.len() + 1,
                        format!("`{name}` expects a finite number, got `{v}`"),
                    )
                }),
            None => {
                default.ok_or_else(|| self.err(self.key.col, format!("missing parameter `{name}`")))
            }
        }
    }

    fn usize_param(&self, name: &str, default: Option<usize>) -> Result<usize, SceneError> {
        match self.param(name) {
            Some((k, v)) => v.parse::<usize>().map_err(|_| {
                self.err(
                    k.col + name.len() + 1,
                    format!("`{name}` expects a non-negative integer, got `{v}`"),
                )
            }),
            None => {
                default.ok_or_else(|| self.err(self.key.col, format!("missing parameter `{name}`")))
            }
        }
    }

    fn value_u64(&self) -> Result<u64, SceneError> {
        let v = self
            .value
            .as_ref()
            .ok_or_else(|| self.err(self.key.col, "missing value"))?;
        v.text.parse().map_err(|_| {
            self.err(
                v.col,
                format!("expected a non-negative integer, got `{}`", v.text),
            )
        })
    }

    fn value_text(&self) -> Result<&'a str, SceneError> {
        self.value
            .as_ref()
            .map(|v| v.text)
            .ok_or_else(|| self.err(self.key.col, "missing value"))
    }
}

fn parse_entry(line_no: usize, line: &str) -> Result<Option<Entry<'_>>, SceneError> {
    let body = line.split('#').next().unwrap_or("");
    let toks = tokens(body);
    let mut it = toks.into_iter();
    let Some(key) = it.next() else {
        return Ok(None);
    };
    let mut value = None;
    let mut params = Vec::new();
    for (i, t) in it.enumerate() {
        match t.text.split_once('=') {
            Some((k, v)) => {
                if k.is_empty() || v.is_empty() {
                    return Err(SceneError::Parse {
                        line: line_no,
                        col: t.col,
                        msg: format!("malformed parameter `{}`", t.text),
                    });
                }
                if params.iter().any(|(p, _): &(Token, &str)| p.text == k) {
                    return Err(SceneError::Parse {
                        line: line_no,
                        col: t.col,
                        msg: format!("duplicate parameter `{k}`"),
                    });
                }
                let col = t.col;
                params.push((Token { text: k, col }, v));
            }
            None if i == 0 => value = Some(t),
            None => {
                return Err(SceneError::Parse {
                    line: line_no,
                    col: t.col,
                    msg: format!("unexpected token `{}`", t.text),
                })
            }
        }
    }
    Ok(Some(Entry {
        line: line_no,
        key,
        value,
        params,
    }))
}

fn allowed_params(key: &str, value: Option<&str>) -> &'static [&'static str] {
    match (key, value) {
        ("surface", Some("chekanov" | "clifford")) => &["r"],
        ("surface", Some("whitney")) => &[],
        ("surface", Some("circle")) => &["cx", "cy", "r", "s0"],
        ("surface", Some("level_curve")) => &["b"],
        ("surface", Some("fiber")) => &["a", "b"],
        ("surface", Some("seeded" | "admissible")) => &["seed"],
        ("surface", Some("sampled")) => &["closure"],
        ("arc", _) => &["points", "periodic"],
        ("refpoint", _) => &["arc", "s"],
        ("grid", _) => &["rows", "cols"],
        ("out", _) => &["json", "svg"],
        _ => &[],
    }
}

const KEYS: [&str; 8] = [
    "surface", "arc", "refpoint", "op", "grid", "samples", "seed", "out",
];

fn parse_points(e: &Entry, col: usize, text: &str) -> Result<Vec<P2>, SceneError> {
    text.split(';')
        .map(|pair| {
            let (x, y) = pair
                .split_once(',')
                .ok_or_else(|| e.err(col, format!("point `{pair}` is not `x,y`")))?;
            match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(x), Ok(y)) if x.is_finite() && y.is_finite() => Ok([x, y]),
                _ => Err(e.err(col, format!("point `{pair}` is not numeric"))),
            }
        })
        .collect()
}

fn parse_closure(e: &Entry, col: usize, v: &str) -> Result<Closure, SceneError> {
    Ok(match v {
        "open" => Closure::Open,
        "closed" => Closure::Closed,
        "antipodal" => Closure::Antipodal,
        "origin_node" => Closure::OriginNode,
        _ => return Err(e.err(col, format!("unknown closure `{v}`"))),
    })
}

fn closure_name(c: Closure) -> &'static str {
    match c {
        Closure::Open => "open",
        Closure::Closed => "closed",
        Closure::Antipodal => "antipodal",
        Closure::OriginNode => "origin_node",
    }
}

pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(e) = parse_entry(i + 1, line)? {
            entries.push(e);
        }
    }
    // Unknown keys and parameters are collected before anything else.
    let mut unknown = Vec::new();
    for e in &entries {
        if !KEYS.contains(&e.key.text) {
            unknown.push(e.key.text.to_string());
            continue;
        }
        let allowed = allowed_params(e.key.text, e.value.as_ref().map(|v| v.text));
        for (k, _) in &e.params {
            if !allowed.contains(&k.text) {
                unknown.push(format!("{}.{}", e.key.text, k.text));
            }
        }
    }
    if !unknown.is_empty() {
        return Err(SceneError::Validation {
            keys: unknown,
            msg: "unknown keys".into(),
        });
    }

    let mut surface: Option<(SurfaceSpec, usize)> = None;
    let mut arcs = Vec::new();
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    let mut scene = Scene::new(SurfaceSpec::Builtin(Builtin::Whitney));
    for e in &entries {
        let key = e.key.text;
        if key != "arc" && key != "op" {
            if let Some(prev) = seen.insert(key, e.line) {
                return Err(e.err(e.key.col, format!("`{key}` already given on line {prev}")));
            }
        }
        match key {
            "surface" => {
                let name = e.value_text()?;
                let spec = match name {
                    "chekanov" => SurfaceSpec::Builtin(Builtin::Chekanov {
                        r: e.f64_param("r", Some(1.0))?,
                    }),
                    "clifford" => SurfaceSpec::Builtin(Builtin::Clifford {
                        r: e.f64_param("r", Some(1.0))?,
                    }),
                    "whitney" => SurfaceSpec::Builtin(Builtin::Whitney),
                    "circle" => SurfaceSpec::Builtin(Builtin::Circle {
                        cx: e.f64_param("cx", None)?,
                        cy: e.f64_param("cy", None)?,
                        r: e.f64_param("r", None)?,
                        s0: e.f64_param("s0", Some(0.0))?,
                    }),
                    "level_curve" => SurfaceSpec::Builtin(Builtin::LevelCurve {
                        b: e.f64_param("b", None)?,
                    }),
                    "fiber" => SurfaceSpec::Fiber(FiberSpec::new(
                        e.f64_param("a", None)?,
                        e.f64_param("b", None)?,
                    )),
                    "seeded" => SurfaceSpec::Seeded(e.usize_param("seed", None)? as u64),
                    "admissible" => SurfaceSpec::Admissible(e.usize_param("seed", None)? as u64),
                    "sampled" => {
                        let closure = match e.param("closure") {
                            Some((k, v)) => parse_closure(e, k.col, v)?,
                            None => Closure::Closed,
                        };
                        SurfaceSpec::Sampled {
                            closure,
                            arcs: Vec::new(),
                        }
                    }
                    other => {
                        let col = e.value.as_ref().map_or(e.key.col, |v| v.col);
                        return Err(e.err(col, format!("unknown surface `{other}`")));
                    }
                };
                surface = Some((spec, e.line));
            }
            "arc" => {
                let (k, v) = e
                    .param("points")
                    .ok_or_else(|| e.err(e.key.col, "missing parameter `points`"))?;
                let points = parse_points(e, k.col, v)?;
                let periodic = match e.param("periodic") {
                    None | Some((_, "false")) => false,
                    Some((_, "true")) => true,
                    Some((k, v)) => {
                        return Err(e.err(
                            k.col,
                            format!("`periodic` expects true or false, got `{v}`"),
                        ))
                    }
                };
                arcs.push(SampledArc { points, periodic });
            }
            "refpoint" => {
                scene.refpoint = Some(LoopPoint {
                    arc: e.usize_param("arc", None)?,
                    s: e.f64_param("s", None)?,
                });
            }
            "op" => {
                let op = match e.value_text()? {
                    "index" => Op::Index,
                    "surgery" => Op::Surgery,
                    "plot" => Op::Plot,
                    other => {
                        return Err(e.err(
                            e.value.as_ref().map_or(1, |v| v.col),
                            format!("unknown op `{other}`"),
                        ))
                    }
                };
                if !scene.ops.contains(&op) {
                    scene.ops.push(op);
                }
            }
            "grid" => {
                scene.rows = e.usize_param("rows", Some(scene.rows))?;
                scene.cols = e.usize_param("cols", Some(scene.cols))?;
            }
            "samples" => scene.samples = e.value_u64()? as usize,
            "seed" => scene.seed = e.value_u64()?,
            "out" => {
                scene.json_out = e.param("json").map(|(_, v)| v.to_string());
                scene.svg_out = e.param("svg").map(|(_, v)| v.to_string());
            }
            _ => unreachable!("keys are checked above"),
        }
    }
    let Some((mut spec, _)) = surface else {
        return Err(SceneError::Validation {
            keys: vec!["surface".into()],
            msg: "missing surface".into(),
        });
    };
    match &mut spec {
        SurfaceSpec::Sampled { arcs: a, .. } => *a = arcs,
        _ if !arcs.is_empty() => {
            return Err(SceneError::Validation {
                keys: vec!["arc".into()],
                msg: "arc lines require `surface sampled`".into(),
            })
        }
        _ => {}
    }
    scene.ops.sort();
    scene.surface = spec;
    validate(&scene)?;
    Ok(scene)
}

fn invalid(key: &str, msg: impl Into<String>) -> SceneError {
    SceneError::Validation {
        keys: vec![key.to_string()],
        msg: msg.into(),
    }
}

fn validate(s: &Scene) -> Result<(), SceneError> {
    if s.samples < MIN_SAMPLES {
        return Err(invalid(
            "samples",
            format!("at least {MIN_SAMPLES} samples required"),
        ));
    }
    if s.rows == 0 || s.cols == 0 {
        return Err(invalid("grid", "grid sizes must be positive"));
    }
    if let SurfaceSpec::Fiber(f) = &s.surface {
        match classify_fiber(f) {
            Ok(FiberClass::Degenerate) => {
                return Err(invalid(
                    "surface",
                    "fiber lies on the boundary of the moment range",
                ))
            }
            Ok(_) => {}
            Err(e) => return Err(invalid("surface", e.to_string())),
        }
    }
    // Cheap construction at the minimum sample count catches bad parameters.
    build_profile(&s.surface, MIN_SAMPLES).map_err(|e| invalid("surface", e.to_string()))?;
    if let (Some(q), SurfaceSpec::Sampled { arcs, .. }) = (&s.refpoint, &s.surface) {
        if q.arc >= arcs.len() {
            return Err(invalid("refpoint", format!("arc {} does not exist", q.arc)));
        }
    }
    if let Some(q) = &s.refpoint {
        if !(0.0..=1.0).contains(&q.s) {
            return Err(invalid("refpoint", "s must lie in [0, 1]"));
        }
    }
    Ok(())
}

/// The normalized text form; `parse_scene(&emit_scene(s)) == s`.
pub fn emit_scene(s: &Scene) -> String {
    let mut out = String::new();
    let _ = match &s.surface {
        SurfaceSpec::Builtin(Builtin::Chekanov { r }) => writeln!(out, "surface chekanov r={r}"),
        SurfaceSpec::Builtin(Builtin::Clifford { r }) => writeln!(out, "surface clifford r={r}"),
        SurfaceSpec::Builtin(Builtin::Whitney) => writeln!(out, "surface whitney"),
        SurfaceSpec::Builtin(Builtin::Circle { cx, cy, r, s0 }) => {
            writeln!(out, "surface circle cx={cx} cy={cy} r={r} s0={s0}")
        }
        SurfaceSpec::Builtin(Builtin::LevelCurve { b }) => {
            writeln!(out, "surface level_curve b={b}")
        }
        SurfaceSpec::Fiber(f) => writeln!(out, "surface fiber a={} b={}", f.a, f.b),
        SurfaceSpec::Seeded(seed) => writeln!(out, "surface seeded seed={seed}"),
        SurfaceSpec::Admissible(seed) => writeln!(out, "surface admissible seed={seed}"),
        SurfaceSpec::Sampled { closure, arcs } => {
            let _ = writeln!(out, "surface sampled closure={}", closure_name(*closure));
            for a in arcs {
                let pts: Vec<String> = a
                    .points
                    .iter()
                    .map(|p| format!("{},{}", p[0], p[1]))
                    .collect();
                let _ = writeln!(out, "arc points={} periodic={}", pts.join(";"), a.periodic);
            }
            Ok(())
        }
    };
    if let Some(q) = &s.refpoint {
        let _ = writeln!(out, "refpoint arc={} s={}", q.arc, q.s);
    }
    for op in &s.ops {
        let _ = writeln!(out, "op {}", op.name());
    }
    let _ = writeln!(out, "grid rows={} cols={}", s.rows, s.cols);
    let _ = writeln!(out, "samples {}", s.samples);
    let _ = writeln!(out, "seed {}", s.seed);
    if s.json_out.is_some() || s.svg_out.is_some() {
        out.push_str("out");
        if let Some(j) = &s.json_out {
            let _ = write!(out, " json={j}");
        }
        if let Some(v) = &s.svg_out {
            let _ = write!(out, " svg={v}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chekanov_scene() {
        let s = parse_scene("surface chekanov r=1.0\nrefpoint arc=0 s=0.0").unwrap();
        assert_eq!(
            s.surface,
            SurfaceSpec::Builtin(Builtin::Chekanov { r: 1.0 })
        );
        assert_eq!(s.refpoint, Some(LoopPoint { arc: 0, s: 0.0 }));
    }

    #[test]
    fn fiber_scene() {
        let s = parse_scene("surface fiber a=0 b=-0.125").unwrap();
        assert_eq!(s.surface, SurfaceSpec::Fiber(FiberSpec::new(0.0, -0.125)));
    }

    #[test]
    fn bad_radius_is_a_validation_error() {
        let e = parse_scene("surface chekanov r=-1").unwrap_err();
        assert!(
            matches!(e, SceneError::Validation { ref keys, .. } if keys == &["surface"]),
            "{e}"
        );
    }

    #[test]
    fn unknown_keys_are_listed() {
        let e = parse_scene("surface chekanov r=1 colour=red\nzoom 3\n").unwrap_err();
        match e {
            SceneError::Validation { keys, .. } => assert_eq!(keys, ["surface.colour", "zoom"]),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse_scene("surface chekanov r=1\nrefpoint arc=x s=0.5").unwrap_err();
        assert_eq!(
            e,
            SceneError::Parse {
                line: 2,
                col: 14,
                msg: "`arc` expects a non-negative integer, got `x`".into()
            }
        );
        let e = parse_scene("surface whitney extra tokens").unwrap_err();
        assert!(
            matches!(
                e,
                SceneError::Parse {
                    line: 1,
                    col: 17,
                    ..
                }
            ),
            "{e}"
        );
    }

    #[test]
    fn comments_and_blank_lines() {
        let s =
            parse_scene("# a scene\n\nsurface whitney  # the sphere\nop plot\nop index\n").unwrap();
        assert_eq!(s.ops, [Op::Index, Op::Plot]);
    }

    #[test]
    fn sampled_scene_round_trips() {
        let pts: Vec<String> = (0..12)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / 12.0;
                format!("{},{}", 2.0 + 0.5 * t.cos(), 0.5 * t.sin())
            })
            .collect();
        let text = format!(
            "surface sampled closure=closed\narc points={} periodic=true\nout json=r.json\n",
            pts.join(";")
        );
        let s = parse_scene(&text).unwrap();
        assert_eq!(parse_scene(&emit_scene(&s)).unwrap(), s);
        assert!(s.profile().unwrap().is_some());
    }
}
