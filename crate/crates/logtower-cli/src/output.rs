//! JSON document shapes; field order is the serialization order.

use serde::Serialize;

#[derive(Serialize)]
pub struct WitnessJson {
    pub kind: &'static str,
    pub n: usize,
    pub c: Option<String>,
}

/// The verdict document. `flw` is only populated by the self-adjoint
/// subcommand; `probe` only appears when numeric verification was asked
/// for (and is null when the probe could not run).
#[derive(Serialize)]
pub struct VerdictJson {
    pub input: String,
    pub normalized: String,
    pub depth: usize,
    pub verdict: &'static str,
    pub witness: WitnessJson,
    pub flw: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<Option<&'static str>>,
}

#[derive(Serialize)]
pub struct SequenceRowJson {
    pub n: usize,
    pub ell: String,
    pub gamma: String,
    pub lambda: String,
    pub omega: String,
    pub sigma_gamma: String,
}

#[derive(Serialize)]
pub struct SequencesJson {
    pub n: usize,
    pub rows: Vec<SequenceRowJson>,
}

#[derive(Serialize)]
pub struct DominantJson {
    pub index: Vec<u32>,
    pub coefficient: String,
    pub sign: i8,
    pub sign_negative_argument: i8,
}

#[derive(Serialize)]
pub struct DecomposeJson {
    pub input: String,
    pub order: usize,
    pub standard: String,
    pub logarithmic: String,
    pub dominant: Option<DominantJson>,
}

#[derive(Serialize)]
pub struct RiccatiJson {
    pub z: String,
    pub f: String,
    pub satisfied: bool,
}

#[derive(Serialize)]
pub struct PhiJson {
    pub input: String,
    pub times: usize,
    pub result: String,
}

#[derive(Serialize)]
pub struct SimulateJson {
    pub input: String,
    pub t0: f64,
    pub t1: f64,
    pub rtol: f64,
    pub atol: f64,
    pub steps: usize,
    pub zeros: usize,
    pub wronskian_drift: Option<f64>,
    pub csv: String,
    pub zeros_csv: String,
}
