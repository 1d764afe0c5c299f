//! Experiment configuration.
//!
//! Configs are INI-style `key = value` files grouped in `[section]`
//! headers; a JSON object `{ "section": { "key": value, ... }, ... }` is
//! accepted as an alternative. Unknown sections or keys are rejected so
//! typos fail loudly.
//!
//! Sections and keys (all optional; defaults give a flat cylinder):
//!
//! ```ini
//! [manifold]
//! p = 3                     # sphere factor dimension + 1
//! f = linear_cone           # linear_cone | wei_f | sqrt_log_f | custom:<expr>
//! h = constant:1            # constant:<c> | poly_decay:<a> | log_decay:<a>
//!                           # | positive_limit:<c>:<decay> | cos_bell | custom:<expr>
//!
//! [ladder]
//! l0 = 1                    # geometric ladder start
//! ratio = 2                 # growth factor
//! count = 8                 # number of rungs
//! list = 1,2,4              # explicit winding numbers (overrides the above)
//!
//! [search]
//! b_grid = 512              # clairaut-constant scan resolution
//! quad_rel_tol = 1e-10      # quadrature tolerance for refined candidates
//! k_cap_factor = 64         # arch-count cap, k <= factor * l
//!
//! [curvature]
//! r_min = 0.01
//! r_max = 100
//! points = 4096
//! p_max = 10000             # if present, search the minimal positive p
//!
//! [escape]
//! epsilon = 0.1             # word-decomposition tolerance
//! tail_fraction = 0.25      # fraction of rows treated as the tail
//!
//! [oracle]
//! l = 1                     # winding class to cross-check
//! resolution = 512          # grid points per axis
//! t_extent = 2.5            # corridor half-width (default: auto from the loop)
//!
//! [output]
//! dir = out
//! format = csv              # csv | json
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use escape_lab_core::geodesic::{geometric_ladder, SearchParams};
use escape_lab_core::warp::{make_positive_limit, ManifoldSpec, WarpingFunction};
use escape_lab_core::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CurvatureConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    pub p_max: Option<u32>,
}

#[derive(Clone, Copy, Debug)]
pub struct EscapeConfig {
    pub epsilon: f64,
    pub tail_fraction: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    pub l: u64,
    pub resolution: usize,
    pub t_extent: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub spec: ManifoldSpec,
    pub ladder: Vec<u64>,
    pub search: SearchParams,
    pub curvature: CurvatureConfig,
    pub escape: EscapeConfig,
    pub oracle: OracleConfig,
    pub out_dir: PathBuf,
    pub format: Format,
    /// Canonical dump of every effective setting; its hash is embedded in
    /// all artifacts.
    pub canonical: String,
}

/// Command-line overrides applied on top of the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub ladder: Option<String>,
}

type KeyMap = BTreeMap<(String, String), String>;

fn parse_ini(text: &str) -> Result<KeyMap> {
    let mut map = KeyMap::new();
    let mut section = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = name.trim().to_string();
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse(format!("config line {}: expected key = value, got {line:?}", lineno + 1)));
        };
        if section.is_empty() {
            return Err(Error::Parse(format!("config line {}: key outside any [section]", lineno + 1)));
        }
        map.insert((section.clone(), key.trim().to_string()), value.trim().to_string());
    }
    Ok(map)
}

fn parse_json(text: &str) -> Result<KeyMap> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("config JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("config JSON root must be an object".into()))?;
    let mut map = KeyMap::new();
    for (section, body) in obj {
        let fields = body.as_object().ok_or_else(|| {
            Error::Parse(format!("config section {section:?} must be an object"))
        })?;
        for (key, v) in fields {
            let s = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                serde_json::Value::Bool(b) => b.to_string(),
                serde_json::Value::Array(items) => items
                    .iter()
                    .map(|x| match x {
                        serde_json::Value::Number(n) => Ok(n.to_string()),
                        serde_json::Value::String(s) => Ok(s.clone()),
                        other => Err(Error::Parse(format!(
                            "config {section}.{key}: unsupported list element {other}"
                        ))),
                    })
                    .collect::<Result<Vec<_>>>()?
                    .join(","),
                other => {
                    return Err(Error::Parse(format!(
                        "config {section}.{key}: unsupported value {other}"
                    )))
                }
            };
            map.insert((section.clone(), key.clone()), s);
        }
    }
    Ok(map)
}

/// Parses a warping-function descriptor such as `poly_decay:1.5` or
/// `positive_limit:1:poly_decay:2`.
pub fn parse_warp(s: &str) -> Result<WarpingFunction> {
    let (head, rest) = match s.split_once(':') {
        Some((h, r)) => (h.trim(), Some(r.trim())),
        None => (s.trim(), None),
    };
    let arg = |what: &str| {
        rest.ok_or_else(|| Error::Parse(format!("{head} needs an argument: {head}:<{what}>")))
    };
    let num = |what: &str| -> Result<f64> {
        let a = arg(what)?;
        a.parse::<f64>().map_err(|_| Error::Parse(format!("{head}: bad number {a:?}")))
    };
    match head {
        "linear_cone" => Ok(WarpingFunction::LinearCone),
        "wei_f" => Ok(WarpingFunction::WeiF),
        "sqrt_log_f" => Ok(WarpingFunction::SqrtLogF),
        "cos_bell" => Ok(WarpingFunction::CosBell),
        "constant" => WarpingFunction::constant(num("c")?),
        "poly_decay" => WarpingFunction::poly_decay(num("alpha")?),
        "log_decay" => WarpingFunction::log_decay(num("alpha")?),
        "positive_limit" => {
            let rest = arg("c>:<decay")?;
            let (c_str, decay_str) = rest.split_once(':').ok_or_else(|| {
                Error::Parse("positive_limit needs positive_limit:<c>:<decay>".into())
            })?;
            let c = c_str
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("positive_limit: bad number {c_str:?}")))?;
            make_positive_limit(c, parse_warp(decay_str)?)
        }
        "custom" => WarpingFunction::custom(arg("expr")?),
        other => Err(Error::Parse(format!("unknown warping function {other:?}"))),
    }
}

fn warp_descriptor(w: &WarpingFunction) -> String {
    match w {
        WarpingFunction::LinearCone => "linear_cone".into(),
        WarpingFunction::WeiF => "wei_f".into(),
        WarpingFunction::SqrtLogF => "sqrt_log_f".into(),
        WarpingFunction::CosBell => "cos_bell".into(),
        WarpingFunction::Constant { c } => format!("constant:{c}"),
        WarpingFunction::PolyDecay { alpha } => format!("poly_decay:{alpha}"),
        WarpingFunction::LogDecay { alpha } => format!("log_decay:{alpha}"),
        WarpingFunction::PositiveLimit { c, decay } => {
            format!("positive_limit:{c}:{}", warp_descriptor(decay))
        }
        WarpingFunction::Custom { expr } => format!("custom:{expr}"),
    }
}

struct Reader {
    map: KeyMap,
    used: std::collections::BTreeSet<(String, String)>,
}

impl Reader {
    fn take(&mut self, section: &str, key: &str) -> Option<String> {
        let k = (section.to_string(), key.to_string());
        let v = self.map.get(&k).cloned();
        if v.is_some() {
            self.used.insert(k);
        }
        v
    }

    fn parse<T: std::str::FromStr>(&mut self, section: &str, key: &str, default: T) -> Result<T> {
        match self.take(section, key) {
            None => Ok(default),
            Some(s) => s
                .parse::<T>()
                .map_err(|_| Error::Parse(format!("config {section}.{key}: bad value {s:?}"))),
        }
    }

    fn finish(self) -> Result<()> {
        for k in self.map.keys() {
            if !self.used.contains(k) {
                return Err(Error::Parse(format!("config: unknown key {}.{}", k.0, k.1)));
            }
        }
        Ok(())
    }
}

fn parse_ladder_flag(s: &str) -> Result<Vec<u64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("--ladder expects l0:ratio:count, got {s:?}")));
    }
    let l0 = parts[0]
        .parse::<u64>()
        .map_err(|_| Error::Parse(format!("--ladder: bad l0 {:?}", parts[0])))?;
    let ratio = parts[1]
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("--ladder: bad ratio {:?}", parts[1])))?;
    let count = parts[2]
        .parse::<usize>()
        .map_err(|_| Error::Parse(format!("--ladder: bad count {:?}", parts[2])))?;
    validate_ladder(l0, ratio, count)?;
    Ok(geometric_ladder(l0, ratio, count))
}

fn validate_ladder(l0: u64, ratio: f64, count: usize) -> Result<()> {
    if l0 < 1 || !(ratio >= 1.0) || count == 0 {
        return Err(Error::InvalidParameter(format!(
            "ladder needs l0 >= 1, ratio >= 1, count >= 1; got {l0}:{ratio}:{count}"
        )));
    }
    Ok(())
}

impl RunConfig {
    /// Loads a config file (INI or JSON, autodetected) and applies
    /// command-line overrides; `path = None` starts from pure defaults.
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<RunConfig> {
        let map = match path {
            None => KeyMap::new(),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    Error::Parse(format!("cannot read config {}: {e}", p.display()))
                })?;
                if text.trim_start().starts_with('{') {
                    parse_json(&text)?
                } else {
                    parse_ini(&text)?
                }
            }
        };
        RunConfig::from_map(map, overrides)
    }

    fn from_map(map: KeyMap, overrides: &Overrides) -> Result<RunConfig> {
        let mut r = Reader { map, used: Default::default() };

        let p: u32 = r.parse("manifold", "p", 3)?;
        let f = match r.take("manifold", "f") {
            Some(s) => parse_warp(&s)?,
            None => WarpingFunction::LinearCone,
        };
        let h = match r.take("manifold", "h") {
            Some(s) => parse_warp(&s)?,
            None => WarpingFunction::constant(1.0)?,
        };
        let spec = ManifoldSpec::new(p, f, h)?;

        let ladder = if let Some(flag) = &overrides.ladder {
            // consume config ladder keys so they do not count as unknown
            for key in ["l0", "ratio", "count", "list"] {
                r.take("ladder", key);
            }
            parse_ladder_flag(flag)?
        } else if let Some(list) = r.take("ladder", "list") {
            for key in ["l0", "ratio", "count"] {
                r.take("ladder", key);
            }
            let ls = list
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("ladder.list: bad entry {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if ls.is_empty() || ls.iter().any(|&l| l < 1) {
                return Err(Error::InvalidParameter("ladder.list must be nonempty positive".into()));
            }
            ls
        } else {
            let l0: u64 = r.parse("ladder", "l0", 1)?;
            let ratio: f64 = r.parse("ladder", "ratio", 2.0)?;
            let count: usize = r.parse("ladder", "count", 8)?;
            validate_ladder(l0, ratio, count)?;
            geometric_ladder(l0, ratio, count)
        };

        let mut search = SearchParams::default();
        search.b_grid = r.parse("search", "b_grid", search.b_grid)?;
        search.quad_rel_tol = r.parse("search", "quad_rel_tol", search.quad_rel_tol)?;
        search.k_cap_factor = r.parse("search", "k_cap_factor", search.k_cap_factor)?;
        if search.b_grid < 8 || !(search.quad_rel_tol > 0.0) || search.k_cap_factor < 1 {
            return Err(Error::InvalidParameter("search: b_grid >= 8, quad_rel_tol > 0, k_cap_factor >= 1".into()));
        }

        let curvature = CurvatureConfig {
            r_min: r.parse("curvature", "r_min", 1e-2)?,
            r_max: r.parse("curvature", "r_max", 1e2)?,
            points: r.parse("curvature", "points", 4096)?,
            p_max: match r.take("curvature", "p_max") {
                None => None,
                Some(s) => Some(s.parse::<u32>().map_err(|_| {
                    Error::Parse(format!("config curvature.p_max: bad value {s:?}"))
                })?),
            },
        };

        let escape = EscapeConfig {
            epsilon: r.parse("escape", "epsilon", 0.1)?,
            tail_fraction: r.parse("escape", "tail_fraction", 0.25)?,
        };
        if !(escape.epsilon > 0.0) || !(escape.tail_fraction > 0.0 && escape.tail_fraction <= 1.0) {
            return Err(Error::InvalidParameter("escape: epsilon > 0, 0 < tail_fraction <= 1".into()));
        }

        let oracle = OracleConfig {
            l: r.parse("oracle", "l", 1)?,
            resolution: r.parse("oracle", "resolution", 512)?,
            t_extent: match r.take("oracle", "t_extent") {
                None => None,
                Some(s) => Some(s.parse::<f64>().map_err(|_| {
                    Error::Parse(format!("config oracle.t_extent: bad value {s:?}"))
                })?),
            },
        };

        let out_dir = overrides
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from(r.take("output", "dir").unwrap_or_else(|| "out".into())));
        if overrides.out.is_some() {
            r.take("output", "dir");
        }
        let format_str = overrides
            .format
            .clone()
            .or_else(|| r.take("output", "format"))
            .unwrap_or_else(|| "csv".into());
        if overrides.format.is_some() {
            r.take("output", "format");
        }
        let format = match format_str.as_str() {
            "csv" => Format::Csv,
            "json" => Format::Json,
            other => return Err(Error::Parse(format!("output.format must be csv or json, got {other:?}"))),
        };

        r.finish()?;

        let mut canonical = String::new();
        let mut push = |k: &str, v: String| {
            canonical.push_str(k);
            canonical.push_str(" = ");
            canonical.push_str(&v);
            canonical.push('\n');
        };
        push("curvature.p_max", format!("{:?}", curvature.p_max));
        push("curvature.points", curvature.points.to_string());
        push("curvature.r_max", curvature.r_max.to_string());
        push("curvature.r_min", curvature.r_min.to_string());
        push("escape.epsilon", escape.epsilon.to_string());
        push("escape.tail_fraction", escape.tail_fraction.to_string());
        push("ladder", format!("{ladder:?}"));
        push("manifold.f", warp_descriptor(&spec.f));
        push("manifold.h", warp_descriptor(&spec.h));
        push("manifold.p", spec.p.to_string());
        push("oracle.l", oracle.l.to_string());
        push("oracle.resolution", oracle.resolution.to_string());
        push("oracle.t_extent", format!("{:?}", oracle.t_extent));
        push("output.format", format.extension().to_string());
        push("search.b_grid", search.b_grid.to_string());
        push("search.k_cap_factor", search.k_cap_factor.to_string());
        push("search.quad_rel_tol", search.quad_rel_tol.to_string());

        Ok(RunConfig { spec, ladder, search, curvature, escape, oracle, out_dir, format, canonical })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ini_round_trip() {
        let map = parse_ini(
            "# comment\n[manifold]\np = 5\nh = poly_decay:1\n\n[ladder]\nlist = 1, 2, 4\n",
        )
        .unwrap();
        let cfg = RunConfig::from_map(map, &Overrides::default()).unwrap();
        assert_eq!(cfg.spec.p, 5);
        assert_eq!(cfg.ladder, vec![1, 2, 4]);
    }

    #[test]
    fn json_alternative() {
        let map = parse_json(
            r#"{"manifold": {"p": 4, "h": "log_decay:1"}, "ladder": {"l0": 2, "ratio": 2, "count": 3}}"#,
        )
        .unwrap();
        let cfg = RunConfig::from_map(map, &Overrides::default()).unwrap();
        assert_eq!(cfg.spec.p, 4);
        assert_eq!(cfg.ladder, vec![2, 4, 8]);
    }

    #[test]
    fn unknown_keys_rejected() {
        let map = parse_ini("[manifold]\nq = 3\n").unwrap();
        assert!(RunConfig::from_map(map, &Overrides::default()).is_err());
    }

    #[test]
    fn warp_descriptors_parse_back() {
        for s in [
            "linear_cone",
            "wei_f",
            "sqrt_log_f",
            "cos_bell",
            "constant:2",
            "poly_decay:1.5",
            "log_decay:1",
            "positive_limit:1:poly_decay:2",
            "custom:(1 + r^2)^(-0.75)",
        ] {
            let w = parse_warp(s).unwrap();
            assert_eq!(parse_warp(&warp_descriptor(&w)).unwrap(), w);
        }
    }

    #[test]
    fn ladder_flag_overrides() {
        let map = parse_ini("[ladder]\nl0 = 1\nratio = 3\ncount = 5\n").unwrap();
        let ov = Overrides { ladder: Some("2:2:3".into()), ..Default::default() };
        let cfg = RunConfig::from_map(map, &ov).unwrap();
        assert_eq!(cfg.ladder, vec![2, 4, 8]);
    }
}
