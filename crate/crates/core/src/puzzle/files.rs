//! Line-oriented text formats for keys and ciphertexts.

use num_traits::Num;

use super::params::PuzzleParams;
use super::scheme::Ciphertext;
use crate::bigmath::Natural;
use crate::{Error, Result};

const KEY_HEADER: &str = "cubelock-key v1";
const CT_HEADER: &str = "cubelock-ct v1";

/// `key=value` lines after a fixed header, with 1-based line numbers.
pub(crate) struct Record<'a> {
    pub(crate) fields: Vec<(usize, &'a str, &'a str)>,
}

impl<'a> Record<'a> {
    pub(crate) fn parse(text: &'a str, header: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
        match lines.next() {
            Some((_, first)) if first.trim() == header => {}
            _ => return Err(Error::format(1, format!("expected header `{header}`"))),
        }
        let mut fields = Vec::new();
        for (no, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::format(no, "expected `key=value`"))?;
            fields.push((no, k.trim(), v.trim()));
        }
        Ok(Record { fields })
    }

    /// The single value for `key`, with its line number.
    pub(crate) fn one(&self, key: &str) -> Result<(usize, &'a str)> {
        let mut hits = self.fields.iter().filter(|(_, k, _)| *k == key);
        let (no, _, v) = hits.next().ok_or_else(|| Error::format(self.last_line(), format!("missing `{key}`")))?;
        if let Some((dup, _, _)) = hits.next() {
            return Err(Error::format(*dup, format!("duplicate `{key}`")));
        }
        Ok((*no, v))
    }

    pub(crate) fn all(&self, key: &str) -> Vec<(usize, &'a str)> {
        self.fields.iter().filter(|(_, k, _)| *k == key).map(|(n, _, v)| (*n, *v)).collect()
    }

    pub(crate) fn reject_unknown(&self, known: &[&str]) -> Result<()> {
        match self.fields.iter().find(|(_, k, _)| !known.contains(k)) {
            Some((no, k, _)) => Err(Error::format(*no, format!("unknown field `{k}`"))),
            None => Ok(()),
        }
    }

    fn last_line(&self) -> usize {
        self.fields.last().map_or(1, |f| f.0)
    }
}

/// Parses a hexadecimal natural, with the line number used in errors.
pub fn parse_hex(text: &str, line: usize) -> Result<Natural> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(Error::format(line, format!("`{text}` is not hexadecimal")));
    }
    Natural::from_str_radix(text, 16).map_err(|e| Error::format(line, e.to_string()))
}

pub(crate) fn parse_bytes16(text: &str, line: usize) -> Result<[u8; 16]> {
    if text.len() != 32 {
        return Err(Error::format(line, "expected 32 hex characters"));
    }
    let mut out = [0u8; 16];
    for (i, chunk) in text.as_bytes().chunks(2).enumerate() {
        let s = std::str::from_utf8(chunk).map_err(|_| Error::format(line, "not hexadecimal"))?;
        out[i] = u8::from_str_radix(s, 16).map_err(|_| Error::format(line, "not hexadecimal"))?;
    }
    Ok(out)
}

pub(crate) fn hex16(bytes: &[u8; 16]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_decimal<T: std::str::FromStr>(text: &str, line: usize, what: &str) -> Result<T> {
    text.parse().map_err(|_| Error::format(line, format!("`{text}` is not a valid {what}")))
}

impl PuzzleParams {
    /// Key file text.
    pub fn to_key_file(&self) -> String {
        format!(
            "{KEY_HEADER}\np={}\nb={}\nT={}\nlambda={}\n",
            self.p().to_str_radix(16),
            self.b().to_str_radix(16),
            self.t_seconds(),
            self.lambda()
        )
    }

    /// Parses a key file, checking that `b` matches `p`.
    pub fn from_key_file(text: &str) -> Result<Self> {
        let rec = Record::parse(text, KEY_HEADER)?;
        rec.reject_unknown(&["p", "b", "T", "lambda"])?;
        let (pl, p) = rec.one("p")?;
        let (bl, b) = rec.one("b")?;
        let (tl, t) = rec.one("T")?;
        let (ll, lambda) = rec.one("lambda")?;
        let p = parse_hex(p, pl)?;
        let b = parse_hex(b, bl)?;
        let t: f64 = parse_decimal(t, tl, "number of seconds")?;
        let lambda: f64 = parse_decimal(lambda, ll, "squaring rate")?;
        let params = PuzzleParams::from_prime(p, t, lambda).map_err(|e| Error::format(pl, e.to_string()))?;
        if params.b() != &b {
            return Err(Error::format(bl, "b does not equal (1 + 2(p - 1)) / 3"));
        }
        Ok(params)
    }
}

impl Ciphertext {
    /// Ciphertext file text.
    pub fn to_file_string(&self) -> String {
        let chain = self.chain.as_ref().map_or_else(|| "none".to_string(), hex16);
        format!(
            "{CT_HEADER}\nfp={}\nl={}\nchain={chain}\nc={}\n",
            hex16(&self.fingerprint),
            self.seed_bits,
            self.c.to_str_radix(16)
        )
    }

    pub fn from_file_string(text: &str) -> Result<Self> {
        let rec = Record::parse(text, CT_HEADER)?;
        rec.reject_unknown(&["fp", "l", "chain", "c"])?;
        let (fl, fp) = rec.one("fp")?;
        let (ll, l) = rec.one("l")?;
        let (chl, chain) = rec.one("chain")?;
        let (cl, c) = rec.one("c")?;
        let chain = match chain {
            "none" => None,
            id => Some(parse_bytes16(id, chl)?),
        };
        Ok(Ciphertext {
            c: parse_hex(c, cl)?,
            fingerprint: parse_bytes16(fp, fl)?,
            seed_bits: parse_decimal(l, ll, "seed length")?,
            chain,
        })
    }
}
