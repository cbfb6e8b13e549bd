//! Random face configurations: Bernoulli(p) fields, the monotone coupling
//! through shared uniforms, and reproducible seeding.
//!
//! Randomness is counter-based: every replicate draws from its own ChaCha
//! stream keyed by `(seed, replicate)`, and faces consume that stream in
//! canonical order. A configuration is therefore a pure function of
//! `(seed, replicate, window, d)` regardless of thread scheduling.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::{Dim, Window};
use crate::{Error, Result};

const SNAPSHOT_MAGIC: &[u8; 8] = b"HOLEPERC";
const SNAPSHOT_VERSION: u16 = 1;

/// Packed bit-field over the canonical face order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitField {
    len: usize,
    words: Vec<u64>,
}

impl BitField {
    pub fn zeros(len: usize) -> Self {
        BitField {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Bitwise subset test (every set bit of `self` is set in `other`).
    pub fn is_subset_of(&self, other: &BitField) -> bool {
        self.len == other.len
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    /// LSB-first packed bytes, `ceil(len/8)` of them.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len.div_ceil(8)];
        for (i, byte) in out.iter_mut().enumerate() {
            let word = self.words[i / 8];
            *byte = (word >> (8 * (i % 8))) as u8;
        }
        out
    }

    pub fn from_bytes(len: usize, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::SnapshotFormat(format!(
                "bit-field payload has {} bytes, expected {}",
                bytes.len(),
                len.div_ceil(8)
            )));
        }
        let mut bf = BitField::zeros(len);
        for (i, &byte) in bytes.iter().enumerate() {
            bf.words[i / 8] |= (byte as u64) << (8 * (i % 8));
        }
        // trailing padding bits must be zero
        if !len.is_multiple_of(8) {
            let last = bytes.len() - 1;
            if bytes[last] >> (len % 8) != 0 && len / 8 == last {
                return Err(Error::SnapshotFormat(
                    "nonzero padding bits in bit-field".into(),
                ));
            }
        }
        Ok(bf)
    }
}

/// Open/closed states of every face in the window. Faces outside `Λ^n`
/// are implicitly closed (the truncated configuration).
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub window: Window,
    open_faces: BitField,
    /// Probability used to generate this configuration, if any
    /// (record keeping only).
    pub p_label: Option<f64>,
    /// Seed used to generate this configuration, if any.
    pub seed_label: Option<u64>,
}

impl Configuration {
    pub fn all_closed(window: Window) -> Self {
        Configuration {
            window,
            open_faces: BitField::zeros(window.face_count()),
            p_label: None,
            seed_label: None,
        }
    }

    pub fn from_bits(window: Window, open_faces: BitField) -> Self {
        assert_eq!(open_faces.len(), window.face_count());
        Configuration {
            window,
            open_faces,
            p_label: None,
            seed_label: None,
        }
    }

    #[inline]
    pub fn is_open(&self, face_index: usize) -> bool {
        self.open_faces.get(face_index)
    }

    pub fn set_open(&mut self, face_index: usize, open: bool) {
        self.open_faces.set(face_index, open);
    }

    pub fn open_count(&self) -> usize {
        self.open_faces.count_ones()
    }

    pub fn bits(&self) -> &BitField {
        &self.open_faces
    }

    /// Serializes the snapshot: magic, version, d, n, labels, then the face
    /// bit-field in canonical order. Byte-exact round trip.
    pub fn write_snapshot<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(SNAPSHOT_MAGIC)?;
        w.write_all(&SNAPSHOT_VERSION.to_le_bytes())?;
        w.write_all(&(self.window.d() as u16).to_le_bytes())?;
        w.write_all(&(self.window.n() as u32).to_le_bytes())?;
        let mut flags = 0u8;
        if self.p_label.is_some() {
            flags |= 1;
        }
        if self.seed_label.is_some() {
            flags |= 2;
        }
        w.write_all(&[flags])?;
        if let Some(p) = self.p_label {
            w.write_all(&p.to_le_bytes())?;
        }
        if let Some(s) = self.seed_label {
            w.write_all(&s.to_le_bytes())?;
        }
        let bytes = self.open_faces.to_bytes();
        w.write_all(&(self.open_faces.len() as u64).to_le_bytes())?;
        w.write_all(&bytes)?;
        Ok(())
    }

    pub fn read_snapshot<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != SNAPSHOT_MAGIC {
            return Err(Error::SnapshotFormat("bad magic".into()));
        }
        let mut buf2 = [0u8; 2];
        r.read_exact(&mut buf2)?;
        let version = u16::from_le_bytes(buf2);
        if version != SNAPSHOT_VERSION {
            return Err(Error::SnapshotFormat(format!(
                "unsupported version {version}"
            )));
        }
        r.read_exact(&mut buf2)?;
        let d = u16::from_le_bytes(buf2) as usize;
        let mut buf4 = [0u8; 4];
        r.read_exact(&mut buf4)?;
        let n = u32::from_le_bytes(buf4) as usize;
        let mut flags = [0u8; 1];
        r.read_exact(&mut flags)?;
        let p_label = if flags[0] & 1 != 0 {
            let mut b = [0u8; 8];
            r.read_exact(&mut b)?;
            Some(f64::from_le_bytes(b))
        } else {
            None
        };
        let seed_label = if flags[0] & 2 != 0 {
            let mut b = [0u8; 8];
            r.read_exact(&mut b)?;
            Some(u64::from_le_bytes(b))
        } else {
            None
        };
        let mut buf8 = [0u8; 8];
        r.read_exact(&mut buf8)?;
        let len = u64::from_le_bytes(buf8) as usize;
        let window = Window::new(Dim::new(d)?, n);
        if len != window.face_count() {
            return Err(Error::SnapshotFormat(format!(
                "bit-field length {len} does not match window ({} faces)",
                window.face_count()
            )));
        }
        let mut bytes = vec![0u8; len.div_ceil(8)];
        r.read_exact(&mut bytes)?;
        let open_faces = BitField::from_bytes(len, &bytes)?;
        Ok(Configuration {
            window,
            open_faces,
            p_label,
            seed_label,
        })
    }
}

/// One uniform value per in-window face, shared across all thresholds of
/// the coupling.
#[derive(Debug, Clone)]
pub struct UniformField {
    pub window: Window,
    pub values: Vec<f64>,
    pub seed: u64,
    pub replicate: u64,
}

impl UniformField {
    /// Deterministic field for `(seed, replicate, window)`: replicate
    /// selects the ChaCha stream, faces consume it in canonical order.
    pub fn generate(window: Window, seed: u64, replicate: u64) -> Self {
        let mut rng = ChaCha8Rng::from_seed(expand_seed(seed));
        rng.set_stream(replicate);
        let values = (0..window.face_count()).map(|_| rng.gen::<f64>()).collect();
        UniformField {
            window,
            values,
            seed,
            replicate,
        }
    }
}

fn expand_seed(seed: u64) -> [u8; 32] {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    key
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Shared uniforms for the monotone coupling (replicate stream 0).
pub fn coupled_field(window: Window, seed: u64) -> UniformField {
    UniformField::generate(window, seed, 0)
}

/// Opens exactly the faces with `X_Q < p`; ties resolve as closed.
/// For `p1 <= p2` the open set at `p1` is a bitwise subset of the one
/// at `p2`.
pub fn threshold(field: &UniformField, p: f64) -> Configuration {
    let mut bits = BitField::zeros(field.values.len());
    for (i, &x) in field.values.iter().enumerate() {
        if x < p {
            bits.set(i, true);
        }
    }
    Configuration {
        window: field.window,
        open_faces: bits,
        p_label: Some(p),
        seed_label: Some(field.seed),
    }
}

/// Parameters of a Monte Carlo run.
#[derive(Debug, Clone, Copy)]
pub struct SimulationParams {
    pub p: f64,
    pub d: Dim,
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
}

impl SimulationParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParameter(format!(
                "p must lie in [0,1], got {}",
                self.p
            )));
        }
        if self.replicates == 0 {
            return Err(Error::InvalidParameter("replicates must be >= 1".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidParameter("window radius must be >= 1".into()));
        }
        Ok(())
    }

    pub fn window(&self) -> Window {
        Window::new(self.d, self.n)
    }
}

/// Samples one replicate: every in-window face open independently with
/// probability `p`, as a pure function of `(seed, replicate_index)`.
pub fn sample_configuration(params: &SimulationParams, replicate_index: usize) -> Configuration {
    let field = UniformField::generate(params.window(), params.seed, replicate_index as u64);
    threshold(&field, params.p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(d: usize, n: usize) -> Window {
        Window::new(Dim::new(d).unwrap(), n)
    }

    #[test]
    fn degenerate_probabilities() {
        let params = SimulationParams {
            p: 0.0,
            d: Dim::new(2).unwrap(),
            n: 3,
            replicates: 1,
            seed: 11,
        };
        assert_eq!(sample_configuration(&params, 0).open_count(), 0);
        let params = SimulationParams { p: 1.0, ..params };
        let cfg = sample_configuration(&params, 0);
        assert_eq!(cfg.open_count(), cfg.window.face_count());
    }

    #[test]
    fn thresholds_are_nested() {
        let f = coupled_field(window(3, 2), 42);
        assert_eq!(threshold(&f, 0.0).open_count(), 0);
        assert_eq!(threshold(&f, 1.0).open_count(), f.values.len());
        let lo = threshold(&f, 0.3);
        let hi = threshold(&f, 0.6);
        assert!(lo.bits().is_subset_of(hi.bits()));
        assert!(lo.open_count() < hi.open_count());
    }

    #[test]
    fn generation_is_deterministic_and_stream_split() {
        let w = window(2, 4);
        let a = UniformField::generate(w, 7, 3);
        let b = UniformField::generate(w, 7, 3);
        assert_eq!(a.values, b.values);
        let c = UniformField::generate(w, 7, 4);
        assert_ne!(a.values, c.values);
        let d = UniformField::generate(w, 8, 3);
        assert_ne!(a.values, d.values);
    }

    #[test]
    fn open_fraction_obeys_law_of_large_numbers() {
        let params = SimulationParams {
            p: 0.5,
            d: Dim::new(2).unwrap(),
            n: 20,
            replicates: 10_000,
            seed: 2024,
        };
        let faces = params.window().face_count();
        let mut open = 0usize;
        for r in 0..params.replicates {
            open += sample_configuration(&params, r).open_count();
        }
        let fraction = open as f64 / (faces * params.replicates) as f64;
        assert!(
            (fraction - 0.5).abs() < 0.01,
            "open fraction {fraction} deviates from 0.5"
        );
    }

    #[test]
    fn per_face_frequency_passes_chi_square() {
        // 40 faces at d=2, n=2; chi-square with 40 dof, alpha = 0.001.
        let p = 0.3;
        let reps = 10_000usize;
        let w = window(2, 2);
        let faces = w.face_count();
        assert_eq!(faces, 40);
        let mut counts = vec![0u64; faces];
        for r in 0..reps {
            let field = UniformField::generate(w, 555, r as u64);
            for (i, &x) in field.values.iter().enumerate() {
                if x < p {
                    counts[i] += 1;
                }
            }
        }
        let expected = reps as f64 * p;
        let var = reps as f64 * p * (1.0 - p);
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let diff = c as f64 - expected;
                diff * diff / var
            })
            .sum();
        let critical = 73.402; // chi-square 0.999 quantile, 40 dof
        assert!(chi2 < critical, "chi2 = {chi2} exceeds {critical}");
    }

    #[test]
    fn snapshot_round_trips_byte_exact() {
        let params = SimulationParams {
            p: 0.37,
            d: Dim::new(3).unwrap(),
            n: 2,
            replicates: 1,
            seed: 99,
        };
        let cfg = sample_configuration(&params, 0);
        let mut buf = Vec::new();
        cfg.write_snapshot(&mut buf).unwrap();
        let back = Configuration::read_snapshot(buf.as_slice()).unwrap();
        assert_eq!(back, cfg);
        let mut buf2 = Vec::new();
        back.write_snapshot(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn snapshot_rejects_corruption() {
        let cfg = Configuration::all_closed(window(2, 2));
        let mut buf = Vec::new();
        cfg.write_snapshot(&mut buf).unwrap();
        buf[0] = b'X';
        assert!(Configuration::read_snapshot(buf.as_slice()).is_err());
    }

    #[test]
    fn params_validation() {
        let good = SimulationParams {
            p: 0.5,
            d: Dim::new(2).unwrap(),
            n: 2,
            replicates: 10,
            seed: 1,
        };
        assert!(good.validate().is_ok());
        assert!(SimulationParams { p: 1.5, ..good }.validate().is_err());
        assert!(SimulationParams { p: f64::NAN, ..good }.validate().is_err());
        assert!(SimulationParams {
            replicates: 0,
            ..good
        }
        .validate()
        .is_err());
    }
}
