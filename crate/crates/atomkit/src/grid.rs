//! Sampled functions on uniform grids.
//!
//! A [`GridFunction`] holds complex samples of a function either on a box
//! `[-M, M)^dim` (uniform step, right endpoint excluded so the grid doubles
//! as one period of a periodic extension) or on the cyclic group `Z_L`.

use num_complex::Complex64;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Where the samples live.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// `[-half_width, half_width)^dim`.
    Box { dim: u8, half_width: f64 },
    /// The cyclic group of the given order.
    Cyclic { order: usize },
}

impl Domain {
    pub fn dim(&self) -> u8 {
        match self {
            Domain::Box { dim, .. } => *dim,
            Domain::Cyclic { .. } => 1,
        }
    }
}

/// Complex samples of a function on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub domain: Domain,
    /// Samples per axis; a power of two.
    pub n: usize,
    /// Row-major samples, length `n^dim`.
    pub samples: Vec<Complex64>,
    /// Set when the samples cover exactly one period of a periodic function.
    pub period: Option<f64>,
}

impl GridFunction {
    pub fn new(domain: Domain, n: usize, samples: Vec<Complex64>, period: Option<f64>) -> Result<Self> {
        if !n.is_power_of_two() {
            return Err(Error::rejected(format!("grid size {n} is not a power of two")));
        }
        let expected = match domain {
            Domain::Box { dim, .. } => n.pow(dim as u32),
            Domain::Cyclic { order } => {
                if order != n {
                    return Err(Error::rejected("cyclic order must equal grid size"));
                }
                n
            }
        };
        if samples.len() != expected {
            return Err(Error::rejected(format!(
                "expected {expected} samples, got {}",
                samples.len()
            )));
        }
        if samples.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(Error::rejected("non-finite sample"));
        }
        if let Some(p) = period {
            if !(p > 0.0) {
                return Err(Error::rejected("period must be positive"));
            }
        }
        Ok(GridFunction { domain, n, samples, period })
    }

    /// Sample a scalar function on a 1-D box grid.
    pub fn from_fn_1d(half_width: f64, n: usize, period: Option<f64>, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let step = 2.0 * half_width / n as f64;
        let samples = (0..n).map(|i| f(-half_width + i as f64 * step)).collect();
        GridFunction::new(Domain::Box { dim: 1, half_width }, n, samples, period)
    }

    /// Sample a scalar function on a 2-D box grid (row-major in `(x1, x2)`).
    pub fn from_fn_2d(half_width: f64, n: usize, period: Option<f64>, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let step = 2.0 * half_width / n as f64;
        let mut samples = Vec::with_capacity(n * n);
        for i in 0..n {
            let x1 = -half_width + i as f64 * step;
            for k in 0..n {
                let x2 = -half_width + k as f64 * step;
                samples.push(f(x1, x2));
            }
        }
        GridFunction::new(Domain::Box { dim: 2, half_width }, n, samples, period)
    }

    pub fn zeros_on(domain: Domain, n: usize, period: Option<f64>) -> Result<Self> {
        let len = match domain {
            Domain::Box { dim, .. } => n.pow(dim as u32),
            Domain::Cyclic { .. } => n,
        };
        GridFunction::new(domain, n, vec![Complex64::new(0.0, 0.0); len], period)
    }

    pub fn dim(&self) -> u8 {
        self.domain.dim()
    }

    /// Grid coordinate along one axis (box domains).
    pub fn coord(&self, i: usize) -> f64 {
        match self.domain {
            Domain::Box { half_width, .. } => {
                -half_width + i as f64 * (2.0 * half_width / self.n as f64)
            }
            Domain::Cyclic { .. } => i as f64,
        }
    }

    pub fn same_grid(&self, other: &GridFunction) -> bool {
        self.domain == other.domain && self.n == other.n
    }

    pub fn scale(&mut self, c: Complex64) {
        for s in &mut self.samples {
            *s *= c;
        }
    }

    /// `self += c * other`; grids must agree.
    pub fn axpy(&mut self, c: Complex64, other: &GridFunction) {
        debug_assert!(self.same_grid(other));
        for (s, o) in self.samples.iter_mut().zip(&other.samples) {
            *s += c * o;
        }
    }

    pub fn sub(&self, other: &GridFunction) -> GridFunction {
        let mut out = self.clone();
        out.axpy(Complex64::new(-1.0, 0.0), other);
        out
    }

    pub fn norm_l2(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn norm_sup(&self) -> f64 {
        self.samples.iter().fold(0.0f64, |m, s| m.max(s.norm()))
    }

    /// Write the CSV serialization: header rows then one row per sample.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        match self.domain {
            Domain::Box { dim, half_width } => {
                writeln!(w, "dim,{dim}")?;
                writeln!(w, "M,{half_width}")?;
            }
            Domain::Cyclic { order } => {
                writeln!(w, "dim,1")?;
                writeln!(w, "L,{order}")?;
            }
        }
        writeln!(w, "N,{}", self.n)?;
        match self.period {
            Some(p) => writeln!(w, "period,{p}")?,
            None => writeln!(w, "period,")?,
        }
        writeln!(w, "index,re,im")?;
        for (i, s) in self.samples.iter().enumerate() {
            writeln!(w, "{i},{},{}", s.re, s.im)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: &mut R) -> Result<Self> {
        let mut lines = r.lines();
        let mut next = || -> Result<String> {
            lines
                .next()
                .ok_or_else(|| Error::rejected("truncated grid CSV"))?
                .map_err(|e| Error::rejected(format!("io error: {e}")))
        };
        let dim_line = next()?;
        let dim: u8 = field(&dim_line, "dim")?;
        let dom_line = next()?;
        let domain = if let Some(rest) = dom_line.strip_prefix("M,") {
            let half_width: f64 = parse(rest)?;
            Domain::Box { dim, half_width }
        } else if let Some(rest) = dom_line.strip_prefix("L,") {
            Domain::Cyclic { order: parse(rest)? }
        } else {
            return Err(Error::rejected("expected M or L header row"));
        };
        let n_line = next()?;
        let n: usize = field(&n_line, "N")?;
        let p_line = next()?;
        let p_str = p_line
            .strip_prefix("period,")
            .ok_or_else(|| Error::rejected("expected period header row"))?;
        let period = if p_str.is_empty() { None } else { Some(parse(p_str)?) };
        let header = next()?;
        if header != "index,re,im" {
            return Err(Error::rejected("expected sample header row"));
        }
        let mut samples = Vec::new();
        for line in lines {
            let line = line.map_err(|e| Error::rejected(format!("io error: {e}")))?;
            if line.is_empty() {
                continue;
            }
            let mut it = line.split(',');
            let _idx = it.next();
            let re: f64 = parse(it.next().ok_or_else(|| Error::rejected("missing re"))?)?;
            let im: f64 = parse(it.next().ok_or_else(|| Error::rejected("missing im"))?)?;
            samples.push(Complex64::new(re, im));
        }
        GridFunction::new(domain, n, samples, period)
    }
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::rejected(format!("unparseable field {s:?}")))
}

fn field<T: std::str::FromStr>(line: &str, key: &str) -> Result<T> {
    let rest = line
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix(','))
        .ok_or_else(|| Error::rejected(format!("expected {key} header row")))?;
    parse(rest)
}
