//! File formats. Coefficients are decimal strings so integers of any size
//! survive a round trip; simplices are written as vertex lists.

use std::io::{Read, Write};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::complex::{FilteredComplex, Graded};
use crate::error::{Error, Result};
use crate::finite_field::OddPrime;
use crate::lifting::{Certificate, LiftReport};
use crate::persistence::{Diagram, PersistencePair};
use crate::ring::{Integers, PrimeField};
use crate::smoothing::{CircularCoords, SmoothedCocycle};
use crate::winding::{DivisionRecord, WindingReport};

/// `{"dim": m, "entries": [[[v0, .., vm], "coef"], ...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedJson {
    pub dim: usize,
    pub entries: Vec<(Vec<usize>, String)>,
}

impl GradedJson {
    pub fn from_graded<E: Clone + PartialEq + ToString, G>(complex: &FilteredComplex, c: &Graded<E, G>) -> Self {
        let entries = c.iter().map(|(i, a)| (complex.simplex(c.dim(), i).vertices().to_vec(), a.to_string())).collect();
        GradedJson { dim: c.dim(), entries }
    }

    fn parsed<T: std::str::FromStr>(&self) -> Result<Vec<(Vec<usize>, T)>> {
        self.entries
            .iter()
            .enumerate()
            .map(|(k, (v, a))| {
                a.trim()
                    .parse()
                    .map(|x| (v.clone(), x))
                    .map_err(|_| Error::Format(format!("entries[{k}]: bad coefficient {a:?}")))
            })
            .collect()
    }

    pub fn to_integer<G>(&self, complex: &FilteredComplex) -> Result<Graded<BigInt, G>> {
        complex.graded_from_vertices(&Integers, self.dim, self.parsed::<BigInt>()?)
    }

    /// Coefficients may be any integers; they are reduced mod `p`.
    pub fn to_mod_p<G>(&self, complex: &FilteredComplex, p: OddPrime) -> Result<Graded<u64, G>> {
        let f = PrimeField::odd(p);
        let q = BigInt::from(p.get());
        let entries = self.parsed::<BigInt>()?.into_iter().map(|(v, a)| {
            let r: u64 = (((a % &q) + &q) % &q).try_into().expect("residue below p");
            (v, r)
        });
        complex.graded_from_vertices(&f, self.dim, entries)
    }
}

/// An explicit complex: a list of `[[vertices], filtration]` maximal simplices.
pub fn read_complex<R: Read>(reader: R) -> Result<FilteredComplex> {
    let simplices: Vec<(Vec<usize>, f64)> = serde_json::from_reader(reader)?;
    if simplices.is_empty() {
        return Err(Error::EmptyInput);
    }
    FilteredComplex::from_maximal(simplices)
}

/// All simplices of a complex in the [`read_complex`] format.
pub fn complex_json(complex: &FilteredComplex) -> Vec<(Vec<usize>, f64)> {
    (0..=complex.top_dim())
        .flat_map(|d| complex.simplices(d).iter().zip(complex.filtrations(d)).map(|(s, &v)| (s.vertices().to_vec(), v)))
        .collect()
}

/// Points as CSV: one row per point, no header.
pub fn read_points<R: Read>(reader: R) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
    let mut out: Vec<Vec<f64>> = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Format(format!("line {}: {e}", line + 1)))?;
        let row = rec
            .iter()
            .enumerate()
            .map(|(field, s)| {
                s.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::Format(format!("line {}, field {}: bad number {s:?}", line + 1, field + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = out.first() {
            if first.len() != row.len() {
                return Err(Error::Format(format!("line {}: expected {} fields, found {}", line + 1, first.len(), row.len())));
            }
        }
        out.push(row);
    }
    if out.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(out)
}

pub fn write_points<W: Write>(points: &[Vec<f64>], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for p in points {
        w.write_record(p.iter().map(|x| x.to_string())).map_err(|e| Error::Format(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairJson {
    pub dim: usize,
    pub birth: f64,
    /// `None` for essential classes.
    pub death: Option<f64>,
    pub persistence: Option<f64>,
    pub birth_simplex: Vec<usize>,
    pub death_simplex: Option<Vec<usize>>,
    pub scale: f64,
}

impl PairJson {
    pub fn new(complex: &FilteredComplex, pair: &PersistencePair) -> Self {
        let finite = |x: f64| x.is_finite().then_some(x);
        PairJson {
            dim: pair.dim,
            birth: pair.birth,
            death: finite(pair.death),
            persistence: finite(pair.persistence()),
            birth_simplex: complex.simplex(pair.dim, pair.birth_simplex).vertices().to_vec(),
            death_simplex: pair.death_simplex.map(|j| complex.simplex(pair.dim + 1, j).vertices().to_vec()),
            scale: pair.scale,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramJson {
    pub prime: u64,
    pub pairs: Vec<PairJson>,
}

impl DiagramJson {
    pub fn new(complex: &FilteredComplex, diagram: &Diagram) -> Self {
        DiagramJson { prime: diagram.prime().get(), pairs: diagram.iter().map(|p| PairJson::new(complex, p)).collect() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiftReportJson {
    pub prime: u64,
    pub r: u64,
    pub certificate: Certificate,
    pub guaranteed: bool,
    pub is_closed: bool,
    pub input: GradedJson,
    pub working_lift: GradedJson,
    pub exact_preimage: GradedJson,
}

impl LiftReportJson {
    pub fn new<G>(complex: &FilteredComplex, report: &LiftReport<G>) -> Self {
        LiftReportJson {
            prime: report.prime.get(),
            r: report.r.value(),
            certificate: report.certificate,
            guaranteed: report.certificate.is_guaranteed(),
            is_closed: report.is_closed,
            input: GradedJson::from_graded(complex, &report.input),
            working_lift: GradedJson::from_graded(complex, &report.working_lift),
            exact_preimage: GradedJson::from_graded(complex, &report.exact_preimage),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WindingReportJson {
    pub pairing: String,
    pub candidate_primes: Vec<u64>,
    pub division_trace: Vec<DivisionRecord>,
    pub omega: String,
    pub reduced_cocycle: GradedJson,
    pub reduced_pairing: String,
}

impl WindingReportJson {
    pub fn new(complex: &FilteredComplex, report: &WindingReport) -> Self {
        WindingReportJson {
            pairing: report.pairing.to_string(),
            candidate_primes: report.candidate_primes.clone(),
            division_trace: report.division_trace.clone(),
            omega: report.omega.to_string(),
            reduced_cocycle: GradedJson::from_graded(complex, &report.reduced_cocycle),
            reduced_pairing: report.reduced_pairing.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SmoothedJson {
    /// `[[a, b], value]` per edge.
    pub alpha_tilde: Vec<(Vec<usize>, f64)>,
    /// `[vertex, value]`.
    pub potential: Vec<(usize, f64)>,
    pub residual_norm: f64,
    pub relative_residual: f64,
}

impl SmoothedJson {
    pub fn new(complex: &FilteredComplex, s: &SmoothedCocycle) -> Self {
        SmoothedJson {
            alpha_tilde: complex.simplices(1).iter().zip(&s.alpha_tilde).map(|(e, &x)| (e.vertices().to_vec(), x)).collect(),
            potential: complex.vertex_ids().into_iter().zip(s.potential.iter().copied()).collect(),
            residual_norm: s.residual_norm,
            relative_residual: s.relative_residual,
        }
    }
}

/// `vertex_id,theta`
pub fn write_coords_csv<W: Write>(coords: &CircularCoords, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["vertex_id", "theta"]).map_err(|e| Error::Format(e.to_string()))?;
    for (v, t) in &coords.values {
        w.write_record([v.to_string(), t.to_string()]).map_err(|e| Error::Format(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_coords_csv<R: Read>(reader: R) -> Result<CircularCoords> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut coords = CircularCoords::default();
    for (line, rec) in rdr.deserialize::<(usize, f64)>().enumerate() {
        let (v, t) = rec.map_err(|e| Error::Format(format!("line {}: {e}", line + 2)))?;
        coords.values.insert(v, t);
    }
    Ok(coords)
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
