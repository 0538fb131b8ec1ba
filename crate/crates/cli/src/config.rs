//! Run configuration and the small text formats accepted on the command line.

use std::fs;
use std::io::Read;
use std::path::Path;

use aj_core::abeljacobi::TargetJson;
use aj_core::curve::{curve_through_points, CurveJson, HyperellipticCurve, PointJson};
use aj_core::rational::parse_rational;
use aj_core::{Rational, TruncatedSeries};
use anyhow::{anyhow, bail, Context, Result};
use num_traits::Zero;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

const CURVE_RETRIES: usize = 32;

/// Everything `construct` and `points` need. Mirrors the command-line flags;
/// this is also the stdin request format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(default)]
    pub curve: Option<CurveJson>,
    #[serde(default)]
    pub fixture_points: Option<Vec<PointJson>>,
    #[serde(default)]
    pub genus: Option<usize>,
    #[serde(default)]
    pub target: Option<TargetJson>,
    #[serde(default = "default_vars")]
    pub vars: usize,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default = "default_bound")]
    pub bound: u64,
    #[serde(default)]
    pub seed: u64,
    /// 0-based rows whose deleted minors must be nonzero (points only).
    #[serde(default)]
    pub required: Option<Vec<usize>>,
}

fn default_vars() -> usize {
    1
}

fn default_order() -> usize {
    3
}

fn default_bound() -> u64 {
    5
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.vars < 1 {
            bail!("--vars must be at least 1");
        }
        if self.order < 2 {
            bail!("--order must be at least 2, got {}", self.order);
        }
        if self.bound < 1 {
            bail!("--bound must be positive");
        }
        match (&self.curve, &self.fixture_points) {
            (Some(_), Some(_)) => bail!("give either --curve or --fixture-points, not both"),
            (None, None) => bail!("one of --curve or --fixture-points is required"),
            _ => Ok(()),
        }
    }

    pub fn curve(&self) -> Result<HyperellipticCurve> {
        if let Some(c) = &self.curve {
            return HyperellipticCurve::from_json(c).context("invalid curve");
        }
        let pts = self.fixture_points.as_ref().expect("validated");
        let pts = pts
            .iter()
            .map(|p| Ok((parse_rational(&p.x)?, parse_rational(&p.y)?)))
            .collect::<aj_core::Result<Vec<_>>>()?;
        let g = self.genus.unwrap_or(pts.len());
        curve_through_points(&pts, g, CURVE_RETRIES).context("cannot build fixture curve")
    }

    pub fn targets(&self) -> Result<Vec<TruncatedSeries>> {
        let t = self.target.as_ref().ok_or_else(|| anyhow!("--target is required"))?;
        Ok(t.to_targets(self.vars, self.order)?)
    }
}

pub fn read_json<T: DeserializeOwned>(path: Option<&Path>) -> Result<T> {
    let text = match path {
        Some(p) if p != Path::new("-") => fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
            s
        }
    };
    serde_json::from_str(&text).context("malformed JSON input")
}

fn is_json_path(s: &str) -> bool {
    s == "-" || s.ends_with(".json")
}

/// A path ending in `.json` (or `-` for stdin), or comma-separated
/// coefficients of `s(x)`, lowest degree first.
pub fn parse_curve_arg(s: &str) -> Result<CurveJson> {
    if is_json_path(s) {
        return read_json(Some(Path::new(s)));
    }
    let coeffs = s
        .split(',')
        .map(|c| parse_rational(c.trim()).map(|r| r.to_string()))
        .collect::<aj_core::Result<Vec<_>>>()?;
    Ok(CurveJson { s_coeffs: coeffs })
}

/// `x:y,x:y,..`
pub fn parse_fixture_points(s: &str) -> Result<Vec<PointJson>> {
    s.split(',')
        .map(|pair| {
            let (x, y) = pair
                .split_once(':')
                .ok_or_else(|| anyhow!("fixture point {pair:?} is not of the form x:y"))?;
            Ok(PointJson {
                x: parse_rational(x.trim())?.to_string(),
                y: parse_rational(y.trim())?.to_string(),
            })
        })
        .collect()
}

/// A path ending in `.json`, or `;`-separated polynomials in `t1..tN`
/// (`t` alone when `N = 1`), e.g. `t1 - 3/2*t1^2*t2; 0`.
pub fn parse_target_arg(s: &str, nvars: usize, order: usize) -> Result<TargetJson> {
    if is_json_path(s) {
        return read_json(Some(Path::new(s)));
    }
    let hs = s
        .split(';')
        .map(|p| parse_polynomial(p, nvars, order))
        .collect::<Result<Vec<_>>>()?;
    Ok(TargetJson::from_targets(&hs))
}

pub fn parse_polynomial(src: &str, nvars: usize, order: usize) -> Result<TruncatedSeries> {
    let text: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        bail!("empty polynomial");
    }
    let mut terms: Vec<(Vec<u32>, Rational)> = Vec::new();
    let mut rest = text.as_str();
    while !rest.is_empty() {
        let (negative, body) = match rest.as_bytes()[0] {
            b'+' => (false, &rest[1..]),
            b'-' => (true, &rest[1..]),
            _ if terms.is_empty() => (false, rest),
            _ => bail!("expected + or - in {src:?}"),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let (term, tail) = body.split_at(end);
        let (exps, mut c) = parse_term(term, nvars).with_context(|| format!("in term {term:?}"))?;
        if negative {
            c = -c;
        }
        terms.push((exps, c));
        rest = tail;
    }
    Ok(TruncatedSeries::from_terms(nvars, order, terms)?)
}

fn parse_term(term: &str, nvars: usize) -> Result<(Vec<u32>, Rational)> {
    if term.is_empty() {
        bail!("missing term");
    }
    let mut exps = vec![0u32; nvars];
    let mut coeff = Rational::from_integer(1.into());
    for factor in term.split('*') {
        if let Some(var) = factor.strip_prefix('t') {
            let (name, power) = match var.split_once('^') {
                Some((n, p)) => (n, p.parse::<u32>().context("bad exponent")?),
                None => (var, 1),
            };
            let index = if name.is_empty() {
                if nvars != 1 {
                    bail!("bare t is only allowed with one variable");
                }
                0
            } else {
                let k: usize = name.parse().context("bad variable name")?;
                if k == 0 || k > nvars {
                    bail!("variable t{k} out of range for {nvars} variables");
                }
                k - 1
            };
            exps[index] += power;
        } else {
            let c = parse_rational(factor)?;
            if c.is_zero() {
                return Ok((exps, c));
            }
            coeff *= c;
        }
    }
    Ok((exps, coeff))
}
