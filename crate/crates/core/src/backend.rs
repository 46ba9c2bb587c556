//! Setup / prove / verify behind a swappable interface.
//!
//! Keys and proofs are opaque containers bound to a circuit by a fingerprint
//! (the SHA-256 of the circuit's canonical JSON). The [`DevBackend`] ships
//! in-crate: it embeds the full witness in the proof and verifies by
//! re-checking the constraints plus the claimed public values. That makes it
//! dependency-free and exact, and **not zero-knowledge** — its description
//! string says so, and callers that need hiding must plug a real SNARK
//! prover into the [`ProofSystem`] seam, consuming the JSON exports of
//! [`ConstraintSystem`] and [`Witness`].
//!
//! File form: a JSON envelope `{"backend", "fingerprint", "public_values",
//! "payload"}`, where the payload is base64 over framed bytes — a 4-byte
//! backend tag, the 32-byte fingerprint, and a length-prefixed opaque body.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::field::FieldElement;
use crate::r1cs::{ConstraintSystem, R1csError, Witness};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BackendError {
    #[error("artifact was produced for a different circuit (fingerprint mismatch)")]
    FingerprintMismatch,
    #[error("witness does not satisfy the circuit; refusing to prove")]
    UnsatisfiedWitness,
    #[error("got {got} public values, the verifying key expects {want}")]
    PublicLengthMismatch { got: usize, want: usize },
    #[error("unknown backend `{0}`")]
    UnknownBackend(String),
    #[error("artifact belongs to backend `{got}`, expected `{want}`")]
    BackendMismatch { got: String, want: String },
    #[error("malformed artifact: {0}")]
    Malformed(String),
    #[error(transparent)]
    R1cs(#[from] R1csError),
}

/// SHA-256 over the canonical JSON export of a constraint system. Binds
/// keys, proofs, and circuits to each other.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fingerprint([u8; 32]);

impl Fingerprint {
    pub fn of(cs: &ConstraintSystem) -> Self {
        let digest = Sha256::digest(cs.to_canonical_json());
        Fingerprint(digest.into())
    }

    pub fn to_hex(self) -> String {
        hex::encode(self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self, BackendError> {
        let bytes = hex::decode(s).map_err(|e| BackendError::Malformed(e.to_string()))?;
        let arr: [u8; 32] = bytes
            .try_into()
            .map_err(|_| BackendError::Malformed("fingerprint must be 32 bytes".into()))?;
        Ok(Fingerprint(arr))
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }
}

impl std::fmt::Debug for Fingerprint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Fingerprint({})", self.to_hex())
    }
}

/// Proving key: opaque body plus the fingerprint of the circuit it was set
/// up for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProvingKey {
    pub backend: String,
    pub fingerprint: Fingerprint,
    pub body: Vec<u8>,
}

/// Verifying key: opaque body, circuit fingerprint, and the number of public
/// values (public inputs followed by outputs) it binds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyingKey {
    pub backend: String,
    pub fingerprint: Fingerprint,
    pub public_len: usize,
    pub body: Vec<u8>,
}

/// A proof with its claimed public values (public inputs followed by
/// outputs, in circuit order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub backend: String,
    pub fingerprint: Fingerprint,
    pub public_values: Vec<FieldElement>,
    pub body: Vec<u8>,
}

/// The prove/verify interface every backend implements. The test suite runs
/// against this trait, so backends are interchangeable behind it.
pub trait ProofSystem {
    /// Short registry name ("dev").
    fn name(&self) -> &'static str;

    /// Honest self-description, including security caveats.
    fn description(&self) -> &'static str;

    /// Produces a key pair bound to the circuit. Deterministic in
    /// `(circuit, entropy)`.
    fn setup(
        &self,
        cs: &ConstraintSystem,
        entropy: &[u8],
    ) -> Result<(ProvingKey, VerifyingKey), BackendError>;

    /// Produces a proof for a satisfying witness. Refuses unsatisfying
    /// witnesses and keys for other circuits.
    fn prove(
        &self,
        pk: &ProvingKey,
        cs: &ConstraintSystem,
        witness: &Witness,
    ) -> Result<Proof, BackendError>;

    /// True iff the proof attests that some witness with exactly these
    /// public values satisfies the circuit the key was set up for.
    fn verify(
        &self,
        vk: &VerifyingKey,
        public_values: &[FieldElement],
        proof: &Proof,
    ) -> Result<bool, BackendError>;
}

/// Looks up a backend by registry name. The development backend is always
/// present; an external SNARK adapter slots in here when built.
pub fn backend_by_name(name: &str) -> Result<Box<dyn ProofSystem>, BackendError> {
    match name {
        "dev" => Ok(Box::new(DevBackend)),
        other => Err(BackendError::UnknownBackend(other.to_string())),
    }
}

fn backend_tag(name: &str) -> Result<[u8; 4], BackendError> {
    match name {
        "dev" => Ok(*b"DEV0"),
        other => Err(BackendError::UnknownBackend(other.to_string())),
    }
}

/// Development backend: witness-revealing, dependency-free, always
/// available.
pub struct DevBackend;

const DEV_KEY_DOMAIN: &[u8] = b"zkmsa.dev.key.v1";

fn dev_key_tag(fingerprint: &Fingerprint, entropy: &[u8]) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(DEV_KEY_DOMAIN);
    hasher.update(fingerprint.as_bytes());
    hasher.update((entropy.len() as u64).to_le_bytes());
    hasher.update(entropy);
    hasher.finalize().into()
}

impl ProofSystem for DevBackend {
    fn name(&self) -> &'static str {
        "dev"
    }

    fn description(&self) -> &'static str {
        "development backend: the proof embeds the full witness and \
         verification re-runs the constraint check, so it is NOT zero-knowledge \
         and must not be used to hide anything"
    }

    fn setup(
        &self,
        cs: &ConstraintSystem,
        entropy: &[u8],
    ) -> Result<(ProvingKey, VerifyingKey), BackendError> {
        let fingerprint = Fingerprint::of(cs);
        let key_tag = dev_key_tag(&fingerprint, entropy);
        let public_len = cs.public_inputs.len() + cs.outputs.len();
        let pk = ProvingKey {
            backend: "dev".into(),
            fingerprint,
            body: key_tag.to_vec(),
        };
        let mut vk_body = key_tag.to_vec();
        vk_body.extend_from_slice(&(public_len as u32).to_le_bytes());
        vk_body.extend_from_slice(&cs.to_canonical_json());
        let vk = VerifyingKey {
            backend: "dev".into(),
            fingerprint,
            public_len,
            body: vk_body,
        };
        Ok((pk, vk))
    }

    fn prove(
        &self,
        pk: &ProvingKey,
        cs: &ConstraintSystem,
        witness: &Witness,
    ) -> Result<Proof, BackendError> {
        if pk.backend != self.name() {
            return Err(BackendError::BackendMismatch {
                got: pk.backend.clone(),
                want: self.name().into(),
            });
        }
        let fingerprint = Fingerprint::of(cs);
        if pk.fingerprint != fingerprint {
            return Err(BackendError::FingerprintMismatch);
        }
        if !cs.check_satisfied(witness)? {
            return Err(BackendError::UnsatisfiedWitness);
        }
        let public_values: Vec<FieldElement> = cs
            .public_signals()
            .into_iter()
            .map(|id| witness.value(id))
            .collect();
        let mut body = pk.body.clone();
        body.extend_from_slice(&serde_json::to_vec(witness).expect("witness serializes"));
        Ok(Proof {
            backend: "dev".into(),
            fingerprint,
            public_values,
            body,
        })
    }

    fn verify(
        &self,
        vk: &VerifyingKey,
        public_values: &[FieldElement],
        proof: &Proof,
    ) -> Result<bool, BackendError> {
        if vk.backend != self.name() || proof.backend != self.name() {
            return Err(BackendError::BackendMismatch {
                got: if vk.backend != self.name() {
                    vk.backend.clone()
                } else {
                    proof.backend.clone()
                },
                want: self.name().into(),
            });
        }
        if public_values.len() != vk.public_len {
            return Err(BackendError::PublicLengthMismatch {
                got: public_values.len(),
                want: vk.public_len,
            });
        }
        if vk.body.len() < 36 {
            return Err(BackendError::Malformed(
                "verifying key body too short".into(),
            ));
        }
        let (vk_tag, rest) = vk.body.split_at(32);
        let (len_bytes, cs_json) = rest.split_at(4);
        let stated = u32::from_le_bytes(len_bytes.try_into().unwrap()) as usize;
        if stated != vk.public_len {
            return Err(BackendError::Malformed(
                "verifying key public count disagrees with body".into(),
            ));
        }
        let cs = ConstraintSystem::from_json(cs_json)?;
        if Fingerprint::of(&cs) != vk.fingerprint {
            return Err(BackendError::Malformed(
                "verifying key embeds a circuit with a different fingerprint".into(),
            ));
        }

        // binding failures are verification failures, not errors
        if proof.fingerprint != vk.fingerprint {
            return Ok(false);
        }
        if proof.body.len() < 32 || &proof.body[..32] != vk_tag {
            return Ok(false);
        }
        let witness: Witness = match serde_json::from_slice(&proof.body[32..]) {
            Ok(w) => w,
            Err(e) => return Err(BackendError::Malformed(format!("proof body: {e}"))),
        };
        if witness.values.len() != cs.num_signals as usize || witness.values[0] != FieldElement::ONE
        {
            return Ok(false);
        }
        if !cs.check_satisfied(&witness)? {
            return Ok(false);
        }
        let bound_values: Vec<FieldElement> = cs
            .public_signals()
            .into_iter()
            .map(|id| witness.value(id))
            .collect();
        Ok(bound_values == public_values)
    }
}

// ---------------------------------------------------------------------------
// Envelope serialization
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct Envelope {
    backend: String,
    fingerprint: String,
    public_values: Vec<FieldElement>,
    payload: String,
}

fn frame(backend: &str, fingerprint: &Fingerprint, body: &[u8]) -> Result<Vec<u8>, BackendError> {
    let mut out = Vec::with_capacity(40 + body.len());
    out.extend_from_slice(&backend_tag(backend)?);
    out.extend_from_slice(fingerprint.as_bytes());
    out.extend_from_slice(&(body.len() as u32).to_le_bytes());
    out.extend_from_slice(body);
    Ok(out)
}

fn unframe(
    backend: &str,
    fingerprint: &Fingerprint,
    bytes: &[u8],
) -> Result<Vec<u8>, BackendError> {
    if bytes.len() < 40 {
        return Err(BackendError::Malformed("payload too short".into()));
    }
    if bytes[..4] != backend_tag(backend)? {
        return Err(BackendError::Malformed(
            "payload backend tag mismatch".into(),
        ));
    }
    if &bytes[4..36] != fingerprint.as_bytes() {
        return Err(BackendError::Malformed(
            "payload fingerprint disagrees with envelope".into(),
        ));
    }
    let len = u32::from_le_bytes(bytes[36..40].try_into().unwrap()) as usize;
    if bytes.len() != 40 + len {
        return Err(BackendError::Malformed("payload length mismatch".into()));
    }
    Ok(bytes[40..].to_vec())
}

use base64::Engine as _;

fn b64() -> base64::engine::GeneralPurpose {
    base64::engine::general_purpose::STANDARD
}

fn to_envelope(
    backend: &str,
    fingerprint: &Fingerprint,
    public_values: &[FieldElement],
    body: &[u8],
) -> Result<Vec<u8>, BackendError> {
    let envelope = Envelope {
        backend: backend.to_string(),
        fingerprint: fingerprint.to_hex(),
        public_values: public_values.to_vec(),
        payload: b64().encode(frame(backend, fingerprint, body)?),
    };
    Ok(serde_json::to_vec_pretty(&envelope).expect("envelope serializes"))
}

fn from_envelope(
    bytes: &[u8],
) -> Result<(String, Fingerprint, Vec<FieldElement>, Vec<u8>), BackendError> {
    let envelope: Envelope =
        serde_json::from_slice(bytes).map_err(|e| BackendError::Malformed(e.to_string()))?;
    let fingerprint = Fingerprint::from_hex(&envelope.fingerprint)?;
    let framed = b64()
        .decode(&envelope.payload)
        .map_err(|e| BackendError::Malformed(e.to_string()))?;
    let body = unframe(&envelope.backend, &fingerprint, &framed)?;
    Ok((envelope.backend, fingerprint, envelope.public_values, body))
}

impl ProvingKey {
    pub fn to_envelope_json(&self) -> Result<Vec<u8>, BackendError> {
        to_envelope(&self.backend, &self.fingerprint, &[], &self.body)
    }

    pub fn from_envelope_json(bytes: &[u8]) -> Result<Self, BackendError> {
        let (backend, fingerprint, _, body) = from_envelope(bytes)?;
        Ok(ProvingKey {
            backend,
            fingerprint,
            body,
        })
    }
}

impl VerifyingKey {
    pub fn to_envelope_json(&self) -> Result<Vec<u8>, BackendError> {
        to_envelope(&self.backend, &self.fingerprint, &[], &self.body)
    }

    pub fn from_envelope_json(bytes: &[u8]) -> Result<Self, BackendError> {
        let (backend, fingerprint, _, body) = from_envelope(bytes)?;
        if body.len() < 36 {
            return Err(BackendError::Malformed(
                "verifying key body too short".into(),
            ));
        }
        let public_len = u32::from_le_bytes(body[32..36].try_into().unwrap()) as usize;
        Ok(VerifyingKey {
            backend,
            fingerprint,
            public_len,
            body,
        })
    }
}

impl Proof {
    pub fn to_envelope_json(&self) -> Result<Vec<u8>, BackendError> {
        to_envelope(
            &self.backend,
            &self.fingerprint,
            &self.public_values,
            &self.body,
        )
    }

    pub fn from_envelope_json(bytes: &[u8]) -> Result<Self, BackendError> {
        let (backend, fingerprint, public_values, body) = from_envelope(bytes)?;
        Ok(Proof {
            backend,
            fingerprint,
            public_values,
            body,
        })
    }
}
