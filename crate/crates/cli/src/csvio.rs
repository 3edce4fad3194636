//! CSV emission and parsing. Floats use the shortest representation that
//! parses back to the same `f64`; rows end in a bare LF.

use std::io::{Read, Write};

use cntflow_core::{Mesh, SolutionProfile, StateVector};

use crate::CliError;

pub const PROFILE_HEADER: [&str; 6] = ["eta", "f", "fp", "fpp", "theta", "thetap"];
pub const SWEEP_HEADER: [&str; 7] = [
    "param",
    "value",
    "particle",
    "skin_friction",
    "nusselt",
    "converged",
    "iterations",
];

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Never)
        .from_writer(w)
}

fn io_err(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

pub fn write_profile<W: Write>(w: W, profile: &SolutionProfile) -> Result<(), CliError> {
    let mut out = writer(w);
    out.write_record(PROFILE_HEADER).map_err(io_err)?;
    for (eta, s) in profile.eta().iter().zip(&profile.states) {
        out.write_record([eta, &s.f, &s.m, &s.n, &s.theta, &s.o].map(|v| v.to_string()))
            .map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

pub fn profile_to_string(profile: &SolutionProfile) -> Result<String, CliError> {
    let mut buf = Vec::new();
    write_profile(&mut buf, profile)?;
    String::from_utf8(buf).map_err(io_err)
}

/// Parse a profile CSV back into nodes and states.
pub fn read_profile<R: Read>(r: R) -> Result<(Mesh, Vec<StateVector>), CliError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let header = rdr.headers().map_err(io_err)?.clone();
    if header.iter().ne(PROFILE_HEADER) {
        return Err(CliError::Invalid(format!("unexpected profile header {header:?}")));
    }
    let mut nodes = Vec::new();
    let mut states = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(io_err)?;
        let v: Vec<f64> = rec
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| CliError::Invalid(format!("bad number '{s}'")))
            })
            .collect::<Result<_, _>>()?;
        nodes.push(v[0]);
        states.push(StateVector::new(v[1], v[2], v[3], v[4], v[5]));
    }
    Ok((Mesh::from_nodes(nodes)?, states))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub param: String,
    pub value: f64,
    pub particle: String,
    pub skin_friction: f64,
    pub nusselt: f64,
    pub converged: bool,
    pub iterations: usize,
}

pub fn write_sweep<W: Write>(w: W, rows: &[SweepRow]) -> Result<(), CliError> {
    let mut out = writer(w);
    out.write_record(SWEEP_HEADER).map_err(io_err)?;
    for r in rows {
        out.write_record([
            r.param.clone(),
            r.value.to_string(),
            r.particle.clone(),
            r.skin_friction.to_string(),
            r.nusselt.to_string(),
            r.converged.to_string(),
            r.iterations.to_string(),
        ])
        .map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}
