//! State files: a one-line JSON header naming the backend and shape,
//! followed by the raw moments or amplitudes as little-endian 64-bit
//! floats.
//!
//! Number-basis states store `dim^n_modes` complex amplitudes as
//! alternating real and imaginary parts. Covariance states store the mean
//! vector (`2·n_modes` floats) followed by the covariance matrix in
//! row-major order (`(2·n_modes)²` floats).

use crate::backend::fock::FockState;
use crate::backend::gaussian::GaussianState;
use crate::error::{Error, Result};
use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

/// A state from either backend, as stored on disk.
#[derive(Debug, Clone)]
pub enum StoredState {
    /// Number-basis pure state.
    Fock(FockState),
    /// Moment-based Gaussian state.
    Gaussian(GaussianState),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "snake_case")]
enum Header {
    Fock { n_modes: usize, cutoff: usize },
    Gaussian { n_modes: usize },
}

/// Writes a state in the documented header-plus-payload layout.
pub fn write_state(state: &StoredState, sink: &mut impl Write) -> Result<()> {
    let mut payload: Vec<f64> = Vec::new();
    let header = match state {
        StoredState::Fock(s) => {
            for a in s.amplitudes() {
                payload.push(a.re);
                payload.push(a.im);
            }
            Header::Fock { n_modes: s.n_modes(), cutoff: s.dim() }
        }
        StoredState::Gaussian(s) => {
            payload.extend(s.mean().iter());
            for row in 0..s.cov().nrows() {
                payload.extend(s.cov().row(row).iter());
            }
            Header::Gaussian { n_modes: s.n_modes() }
        }
    };
    let mut text = serde_json::to_string(&header)?;
    text.push('\n');
    sink.write_all(text.as_bytes())?;
    for v in payload {
        sink.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Reads a state written by [`write_state`].
pub fn read_state(source: &mut impl Read) -> Result<StoredState> {
    let mut header_bytes = Vec::new();
    loop {
        let mut byte = [0u8; 1];
        source.read_exact(&mut byte)?;
        if byte[0] == b'\n' {
            break;
        }
        if header_bytes.len() > 4096 {
            return Err(Error::InvalidData("unterminated state header".into()));
        }
        header_bytes.push(byte[0]);
    }
    let header: Header = serde_json::from_slice(&header_bytes)?;
    let floats = |source: &mut dyn Read, count: usize| -> Result<Vec<f64>> {
        let mut values = Vec::with_capacity(count);
        let mut buf = [0u8; 8];
        for _ in 0..count {
            source.read_exact(&mut buf)?;
            values.push(f64::from_le_bytes(buf));
        }
        Ok(values)
    };
    match header {
        Header::Fock { n_modes, cutoff } => {
            if cutoff == 0 || cutoff.checked_pow(n_modes as u32).is_none() {
                return Err(Error::InvalidData("state header shape overflows".into()));
            }
            let count = cutoff.pow(n_modes as u32);
            let raw = floats(source, 2 * count)?;
            let amps = raw.chunks_exact(2).map(|c| Complex::new(c[0], c[1])).collect();
            Ok(StoredState::Fock(FockState::from_amplitudes(n_modes, cutoff, amps)?))
        }
        Header::Gaussian { n_modes } => {
            let d = 2 * n_modes;
            if n_modes > 4096 {
                return Err(Error::InvalidData("state header shape overflows".into()));
            }
            let mean = DVector::from_vec(floats(source, d)?);
            let cov = DMatrix::from_row_slice(d, d, &floats(source, d * d)?);
            Ok(StoredState::Gaussian(GaussianState::from_parts(mean, cov)?))
        }
    }
}

/// Saves a state to a file.
pub fn save_state(state: &StoredState, path: impl AsRef<Path>) -> Result<()> {
    let mut sink = BufWriter::new(File::create(path)?);
    write_state(state, &mut sink)?;
    sink.flush()?;
    Ok(())
}

/// Loads a state from a file.
pub fn load_state(path: impl AsRef<Path>) -> Result<StoredState> {
    let mut source = BufReader::new(File::open(path)?);
    read_state(&mut source)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Atom;
    use crate::backend::fock::FockSim;

    #[test]
    fn fock_states_round_trip_exactly() {
        let sim = FockSim::new(12);
        let mut state = sim.vacuum(1).tensor(&sim.squeezed(0.6).unwrap()).unwrap();
        sim.apply_atom(&mut state, &Atom::Cz { i: 0, j: 1, sign: 1 }).unwrap();

        let mut bytes = Vec::new();
        write_state(&StoredState::Fock(state.clone()), &mut bytes).unwrap();
        let expected = 12 * 12 * 2 * 8;
        assert_eq!(bytes.len() - 1 - bytes.iter().position(|&b| b == b'\n').unwrap(), expected);

        match read_state(&mut bytes.as_slice()).unwrap() {
            StoredState::Fock(back) => {
                assert_eq!(back.n_modes(), 2);
                assert_eq!(back.dim(), 12);
                assert_eq!(back.amplitudes(), state.amplitudes());
            }
            StoredState::Gaussian(_) => panic!("wrong backend tag"),
        }
    }

    #[test]
    fn gaussian_states_round_trip_exactly() {
        let mut state = GaussianState::vacuum(2);
        state.apply_word(&"CZ@0,1 X(0.3)@0 Z(-1.1)@1".parse().unwrap()).unwrap();

        let mut bytes = Vec::new();
        write_state(&StoredState::Gaussian(state.clone()), &mut bytes).unwrap();
        match read_state(&mut bytes.as_slice()).unwrap() {
            StoredState::Gaussian(back) => {
                assert_eq!(back.mean(), state.mean());
                assert_eq!(back.cov(), state.cov());
            }
            StoredState::Fock(_) => panic!("wrong backend tag"),
        }
    }

    #[test]
    fn truncated_payloads_are_rejected() {
        let sim = FockSim::new(6);
        let mut bytes = Vec::new();
        write_state(&StoredState::Fock(sim.vacuum(1)), &mut bytes).unwrap();
        bytes.truncate(bytes.len() - 3);
        assert!(read_state(&mut bytes.as_slice()).is_err());
    }

    #[test]
    fn corrupt_headers_are_rejected() {
        let bytes = b"{\"backend\":\"fock\",\"n_modes\":2}\n".to_vec();
        assert!(read_state(&mut bytes.as_slice()).is_err(), "missing cutoff field");
        let huge = b"{\"backend\":\"fock\",\"n_modes\":9,\"cutoff\":4096}\n".to_vec();
        assert!(read_state(&mut huge.as_slice()).is_err(), "overflowing shape");
    }

    #[test]
    fn files_round_trip_on_disk() {
        let dir = std::env::temp_dir().join("cvmbqc-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("state.cvs");
        let state = GaussianState::squeezed(0.4).unwrap();
        save_state(&StoredState::Gaussian(state.clone()), &path).unwrap();
        match load_state(&path).unwrap() {
            StoredState::Gaussian(back) => assert_eq!(back.cov(), state.cov()),
            StoredState::Fock(_) => panic!("wrong backend tag"),
        }
        std::fs::remove_file(&path).ok();
    }
}
