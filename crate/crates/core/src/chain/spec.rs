use num_bigint::RandBigInt;
use num_traits::Zero;
use rand::Rng;
use sha2::{Digest, Sha256};

use super::perm::{join_pair, split_pair, PermKind, Permutation};
use crate::bigmath::{DepthTrace, Natural};
use crate::puzzle::files::{hex16, parse_hex, Record};
use crate::puzzle::{cube, pad, unpad_verified, Ciphertext, DecryptOptions, PuzzleParams, Seed};
use crate::{Error, Result};

const CHAIN_HEADER: &str = "cubelock-chain v1";

/// Stage descriptor as written in a chain file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageSpec {
    pub kind: PermKind,
    pub rounds: u32,
    pub key: Vec<u8>,
}

/// An ordered list of keyed permutations `k_1 .. k_n` over one safe prime,
/// defining `h(x) = f(g_1(f(g_2( .. f(g_n(x)) ..))))` with `f(v) = v^3 mod p`.
///
/// If any stage is a pair map the chain works on `Z_p x Z_p`, encoded as
/// `x p + y`; cubing and every other stage then act on each coordinate.
#[derive(Clone, Debug)]
pub struct ChainSpec {
    params: PuzzleParams,
    specs: Vec<StageSpec>,
    stages: Vec<Permutation>,
    pair: bool,
    id: [u8; 16],
}

impl ChainSpec {
    pub fn new(p: &Natural, specs: Vec<StageSpec>) -> Result<Self> {
        let params = PuzzleParams::from_prime(p.clone(), 0.0, 0.0)?;
        let pair = specs.iter().any(|s| s.kind == PermKind::PairMap);
        let square = p * p;
        let stages = specs
            .iter()
            .map(|s| {
                let domain = if s.kind == PermKind::PairMap { &square } else { p };
                Permutation::new(s.kind, domain, &s.key, s.rounds)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut chain = ChainSpec { params, specs, stages, pair, id: [0; 16] };
        let digest = Sha256::digest(chain.to_file_string().as_bytes());
        chain.id = digest[..16].try_into().expect("digest is 32 bytes");
        Ok(chain)
    }

    /// Chain with fresh random keys. A `None` round count means one round
    /// per bit of `p`.
    pub fn random<R: Rng + ?Sized>(p: &Natural, kinds: &[(PermKind, Option<u32>)], rng: &mut R) -> Result<Self> {
        let specs = kinds
            .iter()
            .map(|&(kind, rounds)| {
                let rounds = if kind.is_shuffle() { rounds.unwrap_or(p.bits() as u32) } else { rounds.unwrap_or(0) };
                let key = match kind {
                    PermKind::SwapNeighbors => Vec::new(),
                    PermKind::PairMap => {
                        let width = p.bits().div_ceil(8) as usize;
                        let mut key = crate::bigmath::to_fixed_bytes(&rng.gen_biguint_below(p), width);
                        key.extend(crate::bigmath::to_fixed_bytes(&rng.gen_biguint_below(p), width));
                        key
                    }
                    _ => rng.gen::<[u8; 32]>().to_vec(),
                };
                StageSpec { kind, rounds, key }
            })
            .collect();
        Self::new(p, specs)
    }

    pub fn p(&self) -> &Natural {
        self.params.p()
    }

    pub fn params(&self) -> &PuzzleParams {
        &self.params
    }

    pub fn stages(&self) -> &[Permutation] {
        &self.stages
    }

    pub fn stage_specs(&self) -> &[StageSpec] {
        &self.specs
    }

    pub fn is_pair(&self) -> bool {
        self.pair
    }

    /// First 16 bytes of SHA-256 over the canonical chain file.
    pub fn id(&self) -> [u8; 16] {
        self.id
    }

    pub fn id_hex(&self) -> String {
        hex16(&self.id)
    }

    /// Size of the value space: `p`, or `p^2` for pair chains.
    pub fn domain(&self) -> Natural {
        if self.pair {
            self.p() * self.p()
        } else {
            self.p().clone()
        }
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("{CHAIN_HEADER}\np={}\n", self.p().to_str_radix(16));
        for s in &self.specs {
            let key: String = s.key.iter().map(|b| format!("{b:02x}")).collect();
            out.push_str(&format!("stage={}:{}:{key}\n", s.kind, s.rounds));
        }
        out
    }

    pub fn from_file_string(text: &str) -> Result<Self> {
        let rec = Record::parse(text, CHAIN_HEADER)?;
        rec.reject_unknown(&["p", "stage"])?;
        let (pl, p) = rec.one("p")?;
        let p = parse_hex(p, pl)?;
        let mut specs = Vec::new();
        for (line, value) in rec.all("stage") {
            let mut parts = value.splitn(3, ':');
            let (Some(kind), Some(rounds), Some(key)) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::format(line, "expected `stage=<kind>:<rounds>:<hex key>`"));
            };
            let kind: PermKind = kind.parse().map_err(|e: Error| Error::format(line, e.to_string()))?;
            let rounds = rounds.parse().map_err(|_| Error::format(line, format!("bad round count `{rounds}`")))?;
            if key.len() % 2 != 0 || !key.bytes().all(|b| b.is_ascii_hexdigit()) {
                return Err(Error::format(line, "stage key must be hex bytes"));
            }
            let key = (0..key.len())
                .step_by(2)
                .map(|i| u8::from_str_radix(&key[i..i + 2], 16).expect("validated hex"))
                .collect();
            specs.push(StageSpec { kind, rounds, key });
        }
        Self::new(&p, specs).map_err(|e| match e {
            Error::Format { .. } => e,
            other => Error::format(pl, other.to_string()),
        })
    }

    fn g(&self, stage: &Permutation, x: &Natural, inverse: bool) -> Result<Natural> {
        let eval = |v: &Natural| if inverse { stage.inverse(v) } else { stage.forward(v) };
        if self.pair && stage.kind() != PermKind::PairMap {
            let (a, b) = split_pair(x, self.p());
            Ok(join_pair(&eval(&a)?, &eval(&b)?, self.p()))
        } else {
            eval(x)
        }
    }

    fn f(&self, x: &Natural) -> Natural {
        if self.pair {
            let (a, b) = split_pair(x, self.p());
            join_pair(&cube(&a, &self.params).0, &cube(&b, &self.params).0, self.p())
        } else {
            cube(x, &self.params).0
        }
    }

    fn f_inverse(&self, x: &Natural, options: &DecryptOptions) -> Result<(Natural, DepthTrace)> {
        let arith = self.params.arith(options.strategy);
        let root = |v: &Natural| arith.pow(v, self.params.b(), options.window, options.evaluation);
        if self.pair {
            let (a, b) = split_pair(x, self.p());
            let ((ra, ta), (rb, tb)) = (root(&a)?, root(&b)?);
            Ok((join_pair(&ra, &rb, self.p()), ta.alongside(tb)))
        } else {
            root(x)
        }
    }
}

/// Evaluates the chain: stage `k_n` first, each stage followed by a cube.
pub fn chain_apply(spec: &ChainSpec, x: &Natural) -> Result<Natural> {
    if x >= &spec.domain() {
        return Err(Error::OutOfDomain(x.to_str_radix(16)));
    }
    let mut v = x.clone();
    for stage in spec.stages.iter().rev() {
        v = spec.f(&spec.g(stage, &v, false)?);
    }
    Ok(v)
}

/// Inverts the chain with the default exponentiation options.
pub fn chain_invert(spec: &ChainSpec, c: &Natural) -> Result<(Natural, DepthTrace)> {
    chain_invert_with(spec, c, &DecryptOptions::default())
}

/// Undoes [`chain_apply`]: a cube root then the inverse stage, from `k_1`
/// to `k_n`. The trace sums the sequential exponentiations.
pub fn chain_invert_with(spec: &ChainSpec, c: &Natural, options: &DecryptOptions) -> Result<(Natural, DepthTrace)> {
    if c >= &spec.domain() {
        return Err(Error::OutOfDomain(c.to_str_radix(16)));
    }
    let mut v = c.clone();
    let mut trace = DepthTrace::ZERO;
    for stage in &spec.stages {
        let (root, t) = spec.f_inverse(&v, options)?;
        trace = trace.then(t);
        v = spec.g(stage, &root, true)?;
    }
    Ok((v, trace))
}

/// Pads `message` and encrypts it through the chain instead of a single cube.
pub fn encrypt_chained<R: Rng + ?Sized>(
    message: &[u8],
    params: &PuzzleParams,
    spec: &ChainSpec,
    seed_bits: u64,
    rng: &mut R,
) -> Result<Ciphertext> {
    if spec.p() != params.p() {
        return Err(Error::parameter("chain and key use different primes"));
    }
    if spec.is_pair() {
        return Err(Error::parameter("pair-map chains carry pairs and cannot encrypt a single padded value"));
    }
    let x = pad(message, &Seed::random(seed_bits, rng), params.n())?;
    Ok(Ciphertext { c: chain_apply(spec, &x)?, fingerprint: params.fingerprint(), seed_bits, chain: Some(spec.id()) })
}

/// Opens a ciphertext produced by [`encrypt_chained`].
pub fn decrypt_chained(
    ct: &Ciphertext,
    params: &PuzzleParams,
    spec: &ChainSpec,
    options: &DecryptOptions,
) -> Result<(Vec<u8>, DepthTrace)> {
    if ct.fingerprint != params.fingerprint() || spec.p() != params.p() {
        return Err(Error::WrongKey("ciphertext was made for a different prime".into()));
    }
    if ct.chain != Some(spec.id()) {
        return Err(Error::WrongKey("ciphertext was made with a different chain".into()));
    }
    if ct.c.is_zero() || &ct.c >= params.p() {
        return Err(Error::Integrity("ciphertext value is outside Z_p*".into()));
    }
    let (x, trace) = chain_invert_with(spec, &ct.c, options)?;
    Ok((unpad_verified(&x, params.n(), ct.seed_bits)?, trace))
}
