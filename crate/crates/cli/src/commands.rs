//! Subcommand implementations. Each returns the process exit code (0 valid,
//! 1 invalid/rejected) or an error, which the caller maps to exit code 2.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use zkmsa_core::backend::{backend_by_name, Fingerprint, Proof, ProvingKey, VerifyingKey};
use zkmsa_core::circuit::{
    build_validator, encode_instance, Alphabet, CircuitParams, MsaInstance, VisibilityMask,
};
use zkmsa_core::oracle;
use zkmsa_core::r1cs::{CircuitStats, ConstraintSystem, Witness};
use zkmsa_core::sweep;

use crate::fasta;
use crate::ShapeArgs;

/// On-disk circuit document: the constraint-system interchange fields at the
/// top level, plus a `params` metadata key describing how it was built. The
/// fingerprint covers only the constraint system, not the metadata.
#[derive(Serialize, Deserialize)]
struct CircuitFile {
    params: CircuitParams,
    #[serde(flatten)]
    circuit: ConstraintSystem,
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn load_circuit(path: &Path) -> Result<(CircuitParams, ConstraintSystem)> {
    let bytes = read_file(path)?;
    let file: CircuitFile = serde_json::from_slice(&bytes)
        .with_context(|| format!("parsing circuit file {}", path.display()))?;
    file.circuit
        .validate()
        .with_context(|| format!("validating circuit file {}", path.display()))?;
    Ok((file.params, file.circuit))
}

fn load_instance(path: &Path) -> Result<MsaInstance> {
    let bytes = read_file(path)?;
    serde_json::from_slice(&bytes)
        .with_context(|| format!("parsing instance file {}", path.display()))
}

fn parse_alphabet(spec: &str) -> Result<Alphabet> {
    match spec {
        "dna" => Ok(Alphabet::dna()),
        "protein" => Ok(Alphabet::protein()),
        path => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading alphabet file {path}"))?;
            Ok(Alphabet::from_letters(text.trim())?)
        }
    }
}

#[derive(Serialize)]
struct CompileReport<'a> {
    params: &'a CircuitParams,
    stats: CircuitStats,
}

fn print_stats(stats: &CircuitStats) {
    println!("non-linear constraints: {}", stats.nonlinear_constraints);
    println!("linear constraints:     {}", stats.linear_constraints);
    println!("wires:                  {}", stats.wires);
    println!("public inputs:          {}", stats.public_inputs);
    println!("private inputs:         {}", stats.private_inputs);
    println!("outputs:                {}", stats.outputs);
}

pub fn compile(
    shape: ShapeArgs,
    alphabet: &str,
    private_seq: &[usize],
    private_score: bool,
    out: Option<PathBuf>,
    json: bool,
) -> Result<u8> {
    let mut mask = VisibilityMask::all_public(shape.nseq);
    for &k in private_seq {
        if k >= shape.nseq {
            bail!("--private-seq {k} is out of range for nseq {}", shape.nseq);
        }
        mask.seq_public[k] = false;
    }
    mask.score_public = !private_score;
    let params = CircuitParams::new(shape.nseq, shape.seq_len, shape.aln_len)
        .with_alphabet(parse_alphabet(alphabet)?)
        .with_visibility(mask);
    let circuit = build_validator(&params)?;
    let stats = circuit.stats();

    if json {
        let report = CompileReport {
            params: &params,
            stats,
        };
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!(
            "circuit: nseq={} seq_len={} aln_len={}",
            params.nseq, params.seq_len, params.aln_len
        );
        print_stats(&stats);
    }

    if let Some(path) = out {
        let file = CircuitFile { params, circuit };
        write_file(&path, &serde_json::to_vec(&file)?)?;
        println!("wrote circuit to {}", path.display());
    }
    Ok(0)
}

fn parse_grid(spec: &str) -> Result<Vec<(usize, usize, usize)>> {
    let parts: Vec<&str> = spec.split('x').collect();
    if parts.len() != 3 {
        bail!("grid spec must have three x-separated axes, e.g. \"10x10x10,100\"");
    }
    let axis = |part: &str, name: &str| -> Result<Vec<usize>> {
        part.split(',')
            .filter(|piece| !piece.trim().is_empty())
            .map(|piece| {
                piece
                    .trim()
                    .parse::<usize>()
                    .with_context(|| format!("bad {name} value `{piece}` in grid spec"))
            })
            .collect()
    };
    Ok(sweep::grid_points(
        &axis(parts[0], "nseq")?,
        &axis(parts[1], "seq_len")?,
        &axis(parts[2], "aln_len")?,
    ))
}

pub fn stats_sweep(grid: &str, out: &Path, alphabet: &str) -> Result<u8> {
    let points = parse_grid(grid)?;
    let alphabet = parse_alphabet(alphabet)?;
    let rows = sweep::sweep(&points, &alphabet)?;
    let mut csv = String::from("nseq,seq_len,aln_len,nonlinear,linear,wires\n");
    for row in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.nseq,
            row.seq_len,
            row.aln_len,
            row.stats.nonlinear_constraints,
            row.stats.linear_constraints,
            row.stats.wires
        ));
    }
    write_file(out, csv.as_bytes())?;
    println!("wrote {} rows to {}", rows.len(), out.display());
    Ok(0)
}

pub fn check(
    instance_path: &Path,
    nseq: Option<usize>,
    seq_len: Option<usize>,
    aln_len: Option<usize>,
    alphabet: &str,
) -> Result<u8> {
    let instance = load_instance(instance_path)?;
    match (nseq, seq_len, aln_len) {
        (None, None, None) => {}
        (Some(n), Some(s), Some(a)) => {
            let params = CircuitParams::new(n, s, a).with_alphabet(parse_alphabet(alphabet)?);
            encode_instance(&params, &instance)
                .context("instance does not fit the given circuit shape")?;
        }
        _ => bail!("--nseq, --seq-len, and --aln-len must be given together"),
    }
    match oracle::first_failure(&instance)? {
        None => {
            println!("valid");
            Ok(0)
        }
        Some(reason) => {
            println!("invalid: {reason}");
            Ok(1)
        }
    }
}

pub fn witness(circuit_path: &Path, instance_path: &Path, out: &Path) -> Result<u8> {
    let (params, circuit) = load_circuit(circuit_path)?;
    let instance = load_instance(instance_path)?;
    let inputs =
        encode_instance(&params, &instance).context("instance does not fit this circuit")?;
    let witness = circuit.synthesize_witness(&inputs)?;
    let y = witness.value(circuit.outputs[0]);
    write_file(out, &serde_json::to_vec(&witness)?)?;
    println!("y = {y}");
    Ok(0)
}

pub fn setup(
    circuit_path: &Path,
    entropy: &str,
    pk: &Path,
    vk: &Path,
    backend: &str,
) -> Result<u8> {
    let (_, circuit) = load_circuit(circuit_path)?;
    let system = backend_by_name(backend)?;
    let (proving_key, verifying_key) = system.setup(&circuit, entropy.as_bytes())?;
    write_file(pk, &proving_key.to_envelope_json()?)?;
    write_file(vk, &verifying_key.to_envelope_json()?)?;
    println!(
        "setup complete ({}): fingerprint {}",
        system.name(),
        proving_key.fingerprint.to_hex()
    );
    Ok(0)
}

pub fn prove(
    circuit_path: &Path,
    pk_path: &Path,
    witness_path: &Path,
    out: &Path,
    backend: &str,
) -> Result<u8> {
    let (_, circuit) = load_circuit(circuit_path)?;
    let proving_key = ProvingKey::from_envelope_json(&read_file(pk_path)?)?;
    if proving_key.fingerprint != Fingerprint::of(&circuit) {
        bail!("proving key was produced for a different circuit (fingerprint mismatch)");
    }
    let witness: Witness = serde_json::from_slice(&read_file(witness_path)?)
        .with_context(|| format!("parsing witness file {}", witness_path.display()))?;
    let system = backend_by_name(backend)?;
    let proof = system.prove(&proving_key, &circuit, &witness)?;
    write_file(out, &proof.to_envelope_json()?)?;
    println!(
        "proof written; public output = {}",
        proof
            .public_values
            .last()
            .map(|v| v.to_string())
            .unwrap_or_default()
    );
    Ok(0)
}

pub fn verify(vk_path: &Path, proof_path: &Path) -> Result<u8> {
    let verifying_key = VerifyingKey::from_envelope_json(&read_file(vk_path)?)?;
    let proof = Proof::from_envelope_json(&read_file(proof_path)?)?;
    if proof.fingerprint != verifying_key.fingerprint {
        bail!("proof and verifying key belong to different circuits (fingerprint mismatch)");
    }
    let system = backend_by_name(&verifying_key.backend)?;
    if system.verify(&verifying_key, &proof.public_values, &proof)? {
        println!("verified");
        Ok(0)
    } else {
        println!("rejected");
        Ok(1)
    }
}

pub fn encode(fasta_path: &Path, fasta_aln_path: &Path, score: i64, out: &Path) -> Result<u8> {
    let seqs = fasta::parse(
        &fs::read_to_string(fasta_path)
            .with_context(|| format!("reading {}", fasta_path.display()))?,
    )
    .with_context(|| format!("parsing {}", fasta_path.display()))?;
    let rows = fasta::parse(
        &fs::read_to_string(fasta_aln_path)
            .with_context(|| format!("reading {}", fasta_aln_path.display()))?,
    )
    .with_context(|| format!("parsing {}", fasta_aln_path.display()))?;

    if seqs.len() != rows.len() {
        bail!(
            "{} sequences but {} alignment rows; counts must match",
            seqs.len(),
            rows.len()
        );
    }
    for record in &seqs {
        if record.letters.contains('-') {
            bail!("sequence record `{}` contains a gap character", record.name);
        }
    }
    let instance = MsaInstance {
        seqs: seqs.into_iter().map(|r| r.letters).collect(),
        aln: rows.into_iter().map(|r| r.letters).collect(),
        score,
    };
    write_file(out, &serde_json::to_vec_pretty(&instance)?)?;
    println!(
        "wrote instance with {} rows to {}",
        instance.seqs.len(),
        out.display()
    );
    Ok(0)
}
