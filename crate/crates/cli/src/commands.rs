//! Command dispatch and the exporters.

use crate::config::{Axis, CommandName, Format, ProbeMode, Profile, RunConfig, Sign};
use crate::states::{packet_scale, rng};
use crate::suites::{run_suite, Recorder, SuiteReport};
use biortho::emission::EmissionModel;
use biortho::io::{
    write_columns, write_density_map, write_kg_density, write_kg_density_slice, write_vector_field, GridDescriptor,
};
use biortho::kg::{causality_probe, default_radius, localized_gaussian, probability_density, CausalityMode};
use biortho::lorentz::{invariance_check, Boost, BoxQuadrature, ScalarProfile};
use biortho::photon::{closed_form_projector, photon_probability_density, photon_wavefunction, transverse_delta_check};
use biortho::random::{random_photon_state, smooth_kg_state};
use biortho::spectral::CenteredFft;
use biortho::{Dispersion, Epsilon, GridSpec, Helicity};
use num_complex::Complex64 as C;
use rand::Rng;
use serde_json::{json, Value};
use std::f64::consts::PI;

pub const SCHEMA_VERSION: u32 = 1;

/// Why a run did not succeed; each maps to one exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, config or parameters: exit 2.
    Usage(String),
    /// A numerical guard of the library tripped: exit 3.
    Numerical(String),
}

impl From<biortho::Error> for Failure {
    fn from(e: biortho::Error) -> Self {
        if e.is_numerical_guard() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Some assertion failed: exit 1.
    Failed,
    /// A guard tripped inside a suite: exit 3.
    Guard,
    /// A suite rejected its parameters: exit 2.
    BadInput,
}

/// The bytes to write and, when not successful, the failures to report.
pub struct Artifact {
    pub body: Vec<u8>,
    pub status: Status,
    pub failures: Vec<Value>,
}

impl Artifact {
    fn ok(body: Vec<u8>) -> Self {
        Self { body, status: Status::Ok, failures: Vec::new() }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Artifact, Failure> {
    match cfg.command {
        CommandName::Verify => Ok(verify(cfg)),
        CommandName::KgDensity => kg_density(cfg),
        CommandName::PhotonDensity => photon_density(cfg),
        CommandName::Emission => emission(cfg),
        CommandName::BoostCheck => boost_check(cfg),
        CommandName::TransverseDelta => transverse_delta(cfg),
    }
}

fn json_bytes(v: &Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("JSON values always serialize");
    out.push(b'\n');
    out
}

fn grid_json(g: &GridSpec<f64>) -> Value {
    json!(GridDescriptor { n_per_axis: g.n(), dk: g.dk(), dx: g.dx() })
}

fn setup(cfg: &RunConfig) -> Result<(GridSpec<f64>, Dispersion<f64>), Failure> {
    Ok((GridSpec::new(cfg.grid, cfg.dk)?, Dispersion::new(cfg.mass)?))
}

fn epsilon(s: Sign) -> Epsilon {
    match s {
        Sign::Plus => Epsilon::Plus,
        Sign::Minus => Epsilon::Minus,
    }
}

fn helicity(s: Sign) -> Helicity {
    match s {
        Sign::Plus => Helicity::Plus,
        Sign::Minus => Helicity::Minus,
    }
}

/// Grid indices of the line through the origin along `axis`.
fn line(g: &GridSpec<f64>, axis: Axis) -> Vec<usize> {
    let h = g.n() / 2;
    (0..g.n())
        .map(|m| {
            let mut idx = [h, h, h];
            idx[axis.index()] = m;
            g.flat(idx[0], idx[1], idx[2])
        })
        .collect()
}

fn verify(cfg: &RunConfig) -> Artifact {
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    let (mut guard, mut bad) = (false, false);
    for &suite in &cfg.suites {
        let mut rec = Recorder::default();
        run_suite(suite, cfg, &mut rec);
        guard |= rec.guard_tripped;
        bad |= rec.bad_input;
        for c in rec.checks.iter().filter(|c| !c.pass) {
            let mut f = json!({ "suite": suite.name(), "check": c.name, "value": c.value, "relation": c.relation, "limit": c.limit });
            if let Some(e) = &c.error {
                f["error"] = json!(e);
            }
            failures.push(f);
        }
        reports.push(SuiteReport { suite: suite.name(), checks: rec.checks });
    }
    let status = if guard {
        Status::Guard
    } else if bad {
        Status::BadInput
    } else if failures.is_empty() {
        Status::Ok
    } else {
        Status::Failed
    };
    let body = match cfg.format {
        Format::Json => json_bytes(&json!({
            "schema_version": SCHEMA_VERSION,
            "command": "verify",
            "grid": cfg.grid,
            "dk": cfg.dk,
            "mass": cfg.mass,
            "seed": cfg.seed,
            "passed": status == Status::Ok,
            "suites": reports,
            "failures": failures,
        })),
        Format::Csv => {
            let mut out = String::from("suite,check,value,relation,limit,pass\n");
            for r in &reports {
                for c in &r.checks {
                    out += &format!(
                        "{},{},{},{},{},{}\n",
                        r.suite,
                        c.name,
                        biortho::io::fmt_float(c.value),
                        c.relation,
                        biortho::io::fmt_float(c.limit),
                        c.pass
                    );
                }
            }
            out.into_bytes()
        }
    };
    Artifact { body, status, failures }
}

fn kg_density(cfg: &RunConfig) -> Result<Artifact, Failure> {
    let (g, d) = setup(cfg)?;
    let t = cfg.t.unwrap_or(0.0);
    if let Some(mode) = cfg.probe {
        return kg_probe(cfg, g, d, t, mode);
    }
    let mut r = rng(cfg.seed, 0);
    let (sigma, k_range, x_range) = packet_scale(&g);
    let s = smooth_kg_state(&mut r, g, d, 3, k_range, x_range, sigma, true);
    let p = probability_density(&s, t)?;
    let mut out = Vec::new();
    match (cfg.format, cfg.slice) {
        (Format::Csv, None) => write_kg_density(&g, &p.p_plus, &p.p_minus, &mut out)?,
        (Format::Csv, Some(a)) => write_kg_density_slice(&g, a.index(), &p.p_plus, &p.p_minus, &mut out)?,
        (Format::Json, slice) => {
            let idx: Vec<usize> = match slice {
                Some(a) => line(&g, a),
                None => (0..g.len()).collect(),
            };
            let pick = |v: &[f64]| idx.iter().map(|&i| v[i]).collect::<Vec<f64>>();
            out = json_bytes(&json!({
                "schema_version": SCHEMA_VERSION,
                "command": "kg-density",
                "grid": grid_json(&g),
                "mass": cfg.mass,
                "seed": cfg.seed,
                "t": t,
                "norm": p.total(&g),
                "min": p.min(),
                "slice": slice.map(|a| a.index()),
                "p_plus": pick(&p.p_plus),
                "p_minus": pick(&p.p_minus),
            }));
        }
    }
    Ok(Artifact::ok(out))
}

/// Spreading of a Gaussian localized to three cells: fraction of the field
/// intensity outside the light cone, against its t = 0 value.
fn kg_probe(cfg: &RunConfig, g: GridSpec<f64>, d: Dispersion<f64>, t: f64, mode: ProbeMode) -> Result<Artifact, Failure> {
    let sigma = 3.0 * g.dx();
    let r0 = default_radius(&g, sigma);
    let s = localized_gaussian(g, d, sigma)?;
    let mode = match mode {
        ProbeMode::PositiveOnly => CausalityMode::PositiveOnly,
        ProbeMode::Both => CausalityMode::Both,
    };
    let baseline = causality_probe(&s, 0.0, mode, r0)?.outside_fraction;
    let body = match cfg.format {
        Format::Json => {
            let rep = causality_probe(&s, t, mode, r0)?;
            json_bytes(&json!({
                "schema_version": SCHEMA_VERSION,
                "command": "kg-density",
                "mode": mode,
                "r0": r0,
                "t": rep.t,
                "outside_fraction": rep.outside_fraction,
                "baseline": baseline,
            }))
        }
        Format::Csv => {
            let n = cfg.samples.unwrap_or(11).max(2);
            let ts: Vec<f64> = (0..n).map(|i| t * i as f64 / (n - 1) as f64).collect();
            let fr = ts.iter().map(|&s_t| Ok(causality_probe(&s, s_t, mode, r0)?.outside_fraction)).collect::<Result<Vec<f64>, Failure>>()?;
            let mut out = Vec::new();
            write_columns(["t", "outside_fraction"], &ts, &fr, &mut out)?;
            out
        }
    };
    Ok(Artifact::ok(body))
}

fn photon_density(cfg: &RunConfig) -> Result<Artifact, Failure> {
    let (g, _) = setup(cfg)?;
    let t = cfg.t.unwrap_or(0.0);
    let mut r = rng(cfg.seed, 0);
    let (sigma, _, _) = packet_scale(&g);
    let s = random_photon_state(&mut r, g, 2.0 * sigma);
    let body = match cfg.format {
        Format::Csv => {
            let psi = photon_wavefunction(&s, epsilon(cfg.epsilon), helicity(cfg.helicity), t)?;
            let idx: Vec<usize> = match cfg.slice {
                Some(a) => line(&g, a),
                None => (0..g.len()).collect(),
            };
            let points: Vec<[f64; 3]> = idx.iter().map(|&i| g.x_at(i)).collect();
            let vals: Vec<[C; 3]> = idx.iter().map(|&i| [psi[0][i], psi[1][i], psi[2][i]]).collect();
            let mut out = Vec::new();
            write_vector_field(&points, &vals, &mut out)?;
            out
        }
        Format::Json => {
            let p = photon_probability_density(&s, t)?;
            let mut by = serde_json::Map::new();
            for e in Epsilon::BOTH {
                for h in Helicity::BOTH {
                    let key = format!("{}{}", sign_char(e.sign()), sign_char(h.sign()));
                    by.insert(key, json!(p.component_total(&g, e, h)));
                }
            }
            json_bytes(&json!({
                "schema_version": SCHEMA_VERSION,
                "command": "photon-density",
                "grid": grid_json(&g),
                "seed": cfg.seed,
                "t": t,
                "norm": p.total(&g),
                "min": p.min(),
                "by_epsilon_lambda": by,
            }))
        }
    };
    Ok(Artifact::ok(body))
}

fn sign_char(s: f64) -> char {
    if s > 0.0 {
        '+'
    } else {
        '-'
    }
}

fn emission(cfg: &RunConfig) -> Result<Artifact, Failure> {
    let e = &cfg.emission;
    let t = cfg.t.unwrap_or(100.0 / e.omega0);
    let model = EmissionModel::from_config(e, t)?;
    let (names, a, b): ([&str; 2], Vec<f64>, Vec<f64>);
    let mut extra = serde_json::Map::new();
    let mut map_rows: Option<(Vec<[f64; 3]>, Vec<f64>)> = None;
    match cfg.profile {
        Profile::Radial => {
            let n = cfg.samples.unwrap_or(241).max(2);
            let r_max = 1.2 * t;
            let radii: Vec<f64> = (0..n).map(|i| r_max * i as f64 / (n - 1) as f64).collect();
            let prof = model.radial_density(t, &radii)?;
            extra.insert("wavefront".into(), json!(prof.wavefront()));
            extra.insert("argmax".into(), json!(prof.argmax()));
            extra.insert("integral".into(), json!(prof.integral()));
            (names, a, b) = (["r", "radial_density"], prof.r, prof.density);
        }
        Profile::Number => {
            let n = cfg.samples.unwrap_or(21).max(2);
            let ts: Vec<f64> = (0..n).map(|i| t * i as f64 / (n - 1) as f64).collect();
            let ns = ts.iter().map(|&s| Ok(model.photon_number(s)?)).collect::<Result<Vec<f64>, Failure>>()?;
            (names, a, b) = (["t", "n"], ts, ns);
        }
        Profile::Map => {
            let n = cfg.samples.unwrap_or(41).max(2);
            let ext = 1.2 * t;
            let axis = |i: usize| -ext + 2.0 * ext * i as f64 / (n - 1) as f64;
            let points: Vec<[f64; 3]> = (0..n).flat_map(|i| (0..n).map(move |j| [axis(i), 0.0, axis(j)])).collect();
            let p = model.detection_probability(t, &points)?;
            (names, a, b) = (["", ""], Vec::new(), Vec::new());
            map_rows = Some((points, p));
        }
    }
    let body = match cfg.format {
        Format::Csv => {
            let mut out = Vec::new();
            match &map_rows {
                Some((pts, p)) => write_density_map(pts, p, &mut out)?,
                None => write_columns(names, &a, &b, &mut out)?,
            }
            out
        }
        Format::Json => {
            let mut v = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "emission",
                "config": e,
                "t": t,
                "photon_number": model.photon_number(t)?,
                "covariant_norm": model.covariant_norm(t)?,
                "norm_ratio": model.norm_ratio(t)?,
            });
            let profile = match &map_rows {
                Some((pts, p)) => json!({ "kind": "map", "points": pts, "density": p }),
                None => {
                    let mut m = extra;
                    m.insert("kind".into(), json!(if names[0] == "r" { "radial" } else { "number" }));
                    m.insert(names[0].into(), json!(a));
                    m.insert(names[1].into(), json!(b));
                    Value::Object(m)
                }
            };
            v["profile"] = profile;
            json_bytes(&v)
        }
    };
    Ok(Artifact::ok(body))
}

fn boost_check(cfg: &RunConfig) -> Result<Artifact, Failure> {
    let d = Dispersion::new(cfg.mass)?;
    let norm = cfg.axis.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return Err(Failure::Usage("--axis must be a nonzero vector".into()));
    }
    let axis = cfg.axis.map(|v| v / norm);
    let b = Boost::new(cfg.rapidity, axis)?;
    let mut r = rng(cfg.seed, 0);
    let mut gaussian = |eps| {
        let mut v = || [r.random_range(-0.5..0.5), r.random_range(-0.5..0.5), r.random_range(-0.5..0.5)];
        let (k0, x0) = (v(), v());
        ScalarProfile::gaussian(d, eps, k0, 1.0, x0)
    };
    let (a1, m1, a2, m2) = (gaussian(Epsilon::Plus), gaussian(Epsilon::Minus), gaussian(Epsilon::Plus), gaussian(Epsilon::Minus));
    let mixed = |a: ScalarProfile<f64>, m: ScalarProfile<f64>| {
        ScalarProfile::new(d)
            .with(Epsilon::Plus, move |k| a.eval(Epsilon::Plus, k))
            .with(Epsilon::Minus, move |k| m.eval(Epsilon::Minus, k))
    };
    let rep = invariance_check(&b, &mixed(a1, m1), &mixed(a2, m2), &BoxQuadrature::default());
    let limit = 1e-6;
    let body = match cfg.format {
        Format::Json => {
            let mut v = json!(rep);
            v["schema_version"] = json!(SCHEMA_VERSION);
            v["command"] = json!("boost-check");
            json_bytes(&v)
        }
        Format::Csv => {
            let f = biortho::io::fmt_float::<f64>;
            let row = [
                rep.rapidity,
                rep.axis[0],
                rep.axis[1],
                rep.axis[2],
                rep.original[0],
                rep.original[1],
                rep.boosted[0],
                rep.boosted[1],
                rep.rel_err,
                rep.halving_drift,
            ]
            .map(f)
            .join(",");
            format!("rapidity,axis_x,axis_y,axis_z,original_re,original_im,boosted_re,boosted_im,rel_err,halving_drift\n{row}\n")
                .into_bytes()
        }
    };
    let mut failures = Vec::new();
    if !(rep.rel_err < limit) {
        failures.push(json!({ "check": "rel_err", "value": rep.rel_err, "relation": "<", "limit": limit }));
    }
    if !rep.converged {
        failures.push(json!({ "check": "halving_drift", "value": rep.halving_drift, "relation": "<", "limit": 1e-8 }));
    }
    let status = if failures.is_empty() { Status::Ok } else { Status::Failed };
    Ok(Artifact { body, status, failures })
}

fn transverse_delta(cfg: &RunConfig) -> Result<Artifact, Failure> {
    let (g, _) = setup(cfg)?;
    let ks: Vec<[f64; 3]> = g.momenta().collect();
    let err = transverse_delta_check(&ks);
    let [i, j] = cfg.component;
    // δ⊥_ij(x) = ∫dk/(2π)³ (δ_ij − k̂_i k̂_j) e^{ik·x}, k = 0 left out
    let mut buf: Vec<C> = ks
        .iter()
        .map(|k| if k.iter().all(|&c| c == 0.0) { C::new(0.0, 0.0) } else { C::new(closed_form_projector(k)[i][j], 0.0) })
        .collect();
    CenteredFft::for_grid(&g).transform(&mut buf, 1.0);
    let scale = g.cell_k() / (8.0 * PI * PI * PI);
    let idx = line(&g, cfg.slice.unwrap_or(Axis::X));
    let x: Vec<f64> = (0..g.n()).map(|m| g.axis_x(m)).collect();
    let delta: Vec<f64> = idx.iter().map(|&q| buf[q].re * scale).collect();
    let label = format!("delta_{}{}", ["x", "y", "z"][i], ["x", "y", "z"][j]);
    let body = match cfg.format {
        Format::Csv => {
            let mut out = Vec::new();
            write_columns(["x", &label], &x, &delta, &mut out)?;
            out
        }
        Format::Json => json_bytes(&json!({
            "schema_version": SCHEMA_VERSION,
            "command": "transverse-delta",
            "grid": grid_json(&g),
            "projector_max_err": err,
            "component": [i, j],
            "x": x,
            "delta": delta,
        })),
    };
    let limit = 1e-12;
    let failures = if err < limit {
        Vec::new()
    } else {
        vec![json!({ "check": "projector_max_err", "value": err, "relation": "<", "limit": limit })]
    };
    let status = if failures.is_empty() { Status::Ok } else { Status::Failed };
    Ok(Artifact { body, status, failures })
}
