//! Serialization of spectral fields and CSV export of derived quantities.
//!
//! Field layout: a JSON header followed by little-endian interleaved
//! (re, im) f64 pairs in row-major k order with kz fastest, either inline
//! as base64 (JSON form) or as raw bytes after a newline (binary form).
//! Floats in CSV output use the shortest representation that round-trips.

use crate::error::{Error, Result};
use crate::spectral::{Epsilon, GridSpec, Helicity, SpectralField, Support};
use crate::vec3::Vec3;
use crate::Real;
use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Read, Write};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDescriptor {
    pub n_per_axis: usize,
    pub dk: f64,
    pub dx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub grid: GridDescriptor,
    pub epsilon: Epsilon,
    pub helicity: Option<Helicity>,
    pub time_label: f64,
    pub units: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct FieldDocument {
    header: FieldHeader,
    data: String,
}

fn header_of<T: Real>(f: &SpectralField<T>) -> Result<FieldHeader> {
    let g = f.grid()?;
    Ok(FieldHeader {
        grid: GridDescriptor { n_per_axis: g.n(), dk: g.dk().to_f64_lossy(), dx: g.dx().to_f64_lossy() },
        epsilon: f.epsilon,
        helicity: f.helicity,
        time_label: f.time_label.to_f64_lossy(),
        units: "natural".into(),
    })
}

fn to_bytes<T: Real>(samples: &[Complex<T>]) -> Vec<u8> {
    let mut out = Vec::with_capacity(samples.len() * 16);
    for s in samples {
        out.extend_from_slice(&s.re.to_f64_lossy().to_le_bytes());
        out.extend_from_slice(&s.im.to_f64_lossy().to_le_bytes());
    }
    out
}

fn from_bytes<T: Real>(bytes: &[u8], expected: usize) -> Result<Vec<Complex<T>>> {
    if bytes.len() != expected * 16 {
        return Err(Error::ShapeMismatch { expected: expected * 16, got: bytes.len() });
    }
    Ok(bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex::new(T::lit(re), T::lit(im))
        })
        .collect())
}

fn field_from<T: Real>(h: FieldHeader, samples: Vec<Complex<T>>) -> Result<SpectralField<T>> {
    if h.units != "natural" {
        return Err(Error::Serialization(format!("unsupported units {:?}", h.units)));
    }
    let grid = GridSpec::new(h.grid.n_per_axis, T::lit(h.grid.dk))?;
    let mut f = SpectralField::new(Support::Grid(grid), samples, h.epsilon)?;
    f.helicity = h.helicity;
    f.time_label = T::lit(h.time_label);
    Ok(f)
}

pub fn write_field_json<T: Real, W: Write>(f: &SpectralField<T>, w: W) -> Result<()> {
    let doc = FieldDocument { header: header_of(f)?, data: STANDARD.encode(to_bytes(&f.samples)) };
    serde_json::to_writer(w, &doc)?;
    Ok(())
}

pub fn read_field_json<T: Real, R: Read>(r: R) -> Result<SpectralField<T>> {
    let doc: FieldDocument = serde_json::from_reader(r)?;
    let bytes = STANDARD.decode(doc.data.as_bytes()).map_err(|e| Error::Serialization(e.to_string()))?;
    let n = doc.header.grid.n_per_axis;
    let samples = from_bytes(&bytes, n * n * n)?;
    field_from(doc.header, samples)
}

pub fn write_field_binary<T: Real, W: Write>(f: &SpectralField<T>, mut w: W) -> Result<()> {
    serde_json::to_writer(&mut w, &header_of(f)?)?;
    w.write_all(b"\n")?;
    w.write_all(&to_bytes(&f.samples))?;
    Ok(())
}

pub fn read_field_binary<T: Real, R: BufRead>(mut r: R) -> Result<SpectralField<T>> {
    let mut line = String::new();
    r.read_line(&mut line)?;
    let header: FieldHeader = serde_json::from_str(line.trim_end())?;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let n = header.grid.n_per_axis;
    let samples = from_bytes(&bytes, n * n * n)?;
    field_from(header, samples)
}

/// Shortest round-trip decimal form; exponent notation outside
/// [1e-5, 1e16).
pub fn fmt_float<T: Real>(v: T) -> String {
    let v = v.to_f64_lossy();
    let a = v.abs();
    if v == 0.0 || (1e-5..1e16).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn csv_writer<W: Write>(w: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wr.write_record(header)?;
    Ok(wr)
}

/// Axis line through the k = 0 sample: columns `k,re,im`.
pub fn write_k_slice<T: Real, W: Write>(f: &SpectralField<T>, axis: usize, w: W) -> Result<()> {
    let g = f.grid()?;
    let h = g.n() / 2;
    let mut wr = csv_writer(w, &["k", "re", "im"])?;
    for m in 0..g.n() {
        let mut idx = [h, h, h];
        idx[axis] = m;
        let v = f.samples[g.flat(idx[0], idx[1], idx[2])];
        wr.write_record([fmt_float(g.axis_k(m)), fmt_float(v.re), fmt_float(v.im)])?;
    }
    wr.flush()?;
    Ok(())
}

/// Full-grid KG density: `x,y,z,p_plus,p_minus`.
pub fn write_kg_density<T: Real, W: Write>(g: &GridSpec<T>, p_plus: &[T], p_minus: &[T], w: W) -> Result<()> {
    let mut wr = csv_writer(w, &["x", "y", "z", "p_plus", "p_minus"])?;
    for i in 0..g.len() {
        let x = g.x_at(i);
        wr.write_record([fmt_float(x[0]), fmt_float(x[1]), fmt_float(x[2]), fmt_float(p_plus[i]), fmt_float(p_minus[i])])?;
    }
    wr.flush()?;
    Ok(())
}

/// KG density along an axis through the origin: `x,p_plus,p_minus`.
pub fn write_kg_density_slice<T: Real, W: Write>(g: &GridSpec<T>, axis: usize, p_plus: &[T], p_minus: &[T], w: W) -> Result<()> {
    let h = g.n() / 2;
    let mut wr = csv_writer(w, &["x", "p_plus", "p_minus"])?;
    for m in 0..g.n() {
        let mut idx = [h, h, h];
        idx[axis] = m;
        let i = g.flat(idx[0], idx[1], idx[2]);
        wr.write_record([fmt_float(g.axis_x(m)), fmt_float(p_plus[i]), fmt_float(p_minus[i])])?;
    }
    wr.flush()?;
    Ok(())
}

/// Vector field: `x,y,z,re(ψx),im(ψx),re(ψy),im(ψy),re(ψz),im(ψz)`.
pub fn write_vector_field<T: Real, W: Write>(points: &[Vec3<T>], psi: &[[Complex<T>; 3]], w: W) -> Result<()> {
    let mut wr = csv_writer(w, &["x", "y", "z", "re(psi_x)", "im(psi_x)", "re(psi_y)", "im(psi_y)", "re(psi_z)", "im(psi_z)"])?;
    for (x, v) in points.iter().zip(psi) {
        let mut rec = vec![fmt_float(x[0]), fmt_float(x[1]), fmt_float(x[2])];
        for c in v {
            rec.push(fmt_float(c.re));
            rec.push(fmt_float(c.im));
        }
        wr.write_record(rec)?;
    }
    wr.flush()?;
    Ok(())
}

/// Two-column series with the given header names.
pub fn write_columns<T: Real, W: Write>(names: [&str; 2], a: &[T], b: &[T], w: W) -> Result<()> {
    let mut wr = csv_writer(w, &names)?;
    for (x, y) in a.iter().zip(b) {
        wr.write_record([fmt_float(*x), fmt_float(*y)])?;
    }
    wr.flush()?;
    Ok(())
}

/// Scalar map `x,y,z,density`.
pub fn write_density_map<T: Real, W: Write>(points: &[Vec3<T>], density: &[T], w: W) -> Result<()> {
    let mut wr = csv_writer(w, &["x", "y", "z", "density"])?;
    for (x, d) in points.iter().zip(density) {
        wr.write_record([fmt_float(x[0]), fmt_float(x[1]), fmt_float(x[2]), fmt_float(*d)])?;
    }
    wr.flush()?;
    Ok(())
}
