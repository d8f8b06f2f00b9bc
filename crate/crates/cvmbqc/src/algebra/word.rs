//! Gate words: sequences of atoms with a text syntax.
//!
//! A gate word is a product of atoms written **in operator order**: the
//! leftmost token is the last unitary applied to a state. `X(1)@0 F@0` means
//! "first rotate, then displace".
//!
//! # Text syntax
//!
//! Whitespace-separated tokens, one atom each:
//!
//! ```text
//! X(s)@j  Z(s)@j  F@j  Dq(a,b,c)@j  Dp(a,b,c)@j  Sq(a,b,c)@j  Q(t)@j
//! CZ@i,j  CZd@i,j  CX@i,j  CXd@i,j
//! ```
//!
//! Numbers accept anything `f64::from_str` accepts. `Sq` parses to the same
//! atom as `Dq` (a `q`-phase); `CZd`/`CXd` are the inverses of `CZ`/`CX`.
//!
//! # Examples
//!
//! ```
//! use cvmbqc::algebra::GateWord;
//!
//! let w: GateWord = "X(1.5)@0 CZ@0,1 Dq(0,1,0)@1".parse().unwrap();
//! assert_eq!(w.atoms.len(), 3);
//! assert_eq!(w.n_modes(), 2);
//! assert_eq!(w.to_string(), "X(1.5)@0 CZ@0,1 Dq(0,1,0)@1");
//! ```

use super::atom::Atom;
use super::param::PolyCoeffs;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A product of atoms; `atoms[0]` is the leftmost (last-applied) factor.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GateWord {
    /// The factors, in operator order.
    pub atoms: Vec<Atom>,
}

impl GateWord {
    /// Builds a word from atoms in operator order.
    pub fn new(atoms: Vec<Atom>) -> Self {
        GateWord { atoms }
    }

    /// The empty (identity) word.
    pub fn identity() -> Self {
        GateWord { atoms: Vec::new() }
    }

    /// Number of modes spanned: one more than the largest mode index used
    /// (zero for the empty word).
    pub fn n_modes(&self) -> usize {
        self.atoms.iter().map(|a| a.max_mode() + 1).max().unwrap_or(0)
    }

    /// True when every atom is Gaussian.
    pub fn is_gaussian(&self) -> bool {
        self.atoms.iter().all(Atom::is_gaussian)
    }

    /// The inverse word: reversed order, each atom inverted.
    pub fn inverse(&self) -> GateWord {
        GateWord { atoms: self.atoms.iter().rev().map(Atom::inverse).collect() }
    }

    /// Concatenation `self · other` (other applied first).
    pub fn then(&self, other: &GateWord) -> GateWord {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().copied());
        GateWord { atoms }
    }

    /// Validates all mode indices against a mode count.
    pub fn check_modes(&self, n_modes: usize) -> Result<()> {
        for a in &self.atoms {
            let (m1, m2) = a.modes();
            if m1 >= n_modes {
                return Err(Error::ModeOutOfRange { mode: m1, n_modes });
            }
            if let Some(m2) = m2 {
                if m2 >= n_modes {
                    return Err(Error::ModeOutOfRange { mode: m2, n_modes });
                }
                if m1 == m2 {
                    return Err(Error::DuplicateMode { mode: m1 });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for GateWord {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for a in &self.atoms {
            if !first {
                write!(out, " ")?;
            }
            write!(out, "{a}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for GateWord {
    type Err = Error;

    fn from_str(text: &str) -> Result<GateWord> {
        let mut atoms = Vec::new();
        for (index, token) in text.split_whitespace().enumerate() {
            atoms.push(parse_token(token).map_err(|reason| Error::Parse {
                index,
                token: token.to_string(),
                reason,
            })?);
        }
        Ok(GateWord { atoms })
    }
}

fn parse_token(token: &str) -> std::result::Result<Atom, String> {
    let (head, modes_text) =
        token.split_once('@').ok_or_else(|| "missing '@mode' suffix".to_string())?;
    let (name, args) = match head.split_once('(') {
        Some((name, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| "unterminated '(' in arguments".to_string())?;
            (name, Some(inner))
        }
        None => (head, None),
    };
    let modes: Vec<usize> = modes_text
        .split(',')
        .map(|m| m.trim().parse::<usize>().map_err(|e| format!("bad mode {m:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;

    let one_mode = || -> std::result::Result<usize, String> {
        if modes.len() == 1 {
            Ok(modes[0])
        } else {
            Err(format!("expected one mode, got {}", modes.len()))
        }
    };
    let two_modes = || -> std::result::Result<(usize, usize), String> {
        if modes.len() == 2 {
            if modes[0] == modes[1] {
                return Err("two-mode gate needs distinct modes".to_string());
            }
            Ok((modes[0], modes[1]))
        } else {
            Err(format!("expected two modes, got {}", modes.len()))
        }
    };
    let scalars = |expected: usize| -> std::result::Result<Vec<f64>, String> {
        let inner = args.ok_or_else(|| "missing '(...)' arguments".to_string())?;
        let vals: Vec<f64> = inner
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|e| format!("bad number {v:?}: {e}")))
            .collect::<std::result::Result<_, _>>()?;
        if vals.len() != expected {
            return Err(format!("expected {expected} argument(s), got {}", vals.len()));
        }
        Ok(vals)
    };
    let no_args = || -> std::result::Result<(), String> {
        if args.is_some() {
            Err("unexpected arguments".to_string())
        } else {
            Ok(())
        }
    };

    match name {
        "X" => Ok(Atom::Xd { mode: one_mode()?, s: scalars(1)?[0] }),
        "Z" => Ok(Atom::Zd { mode: one_mode()?, s: scalars(1)?[0] }),
        "F" => {
            no_args()?;
            Ok(Atom::Fourier { mode: one_mode()?, k: 1 })
        }
        "Dq" | "Sq" => {
            let v = scalars(3)?;
            Ok(Atom::PhaseQ { mode: one_mode()?, f: PolyCoeffs::new(v[0], v[1], v[2]) })
        }
        "Dp" => {
            let v = scalars(3)?;
            Ok(Atom::PhaseP { mode: one_mode()?, f: PolyCoeffs::new(v[0], v[1], v[2]) })
        }
        "Q" => {
            let t = scalars(1)?[0];
            if !(t > 0.0) {
                return Err(format!("squeeze parameter must be positive, got {t}"));
            }
            Ok(Atom::Squeeze { mode: one_mode()?, t })
        }
        "CZ" => {
            no_args()?;
            let (i, j) = two_modes()?;
            Ok(Atom::Cz { i, j, sign: 1 })
        }
        "CZd" => {
            no_args()?;
            let (i, j) = two_modes()?;
            Ok(Atom::Cz { i, j, sign: -1 })
        }
        "CX" => {
            no_args()?;
            let (control, target) = two_modes()?;
            Ok(Atom::Cx { control, target, sign: 1 })
        }
        "CXd" => {
            no_args()?;
            let (control, target) = two_modes()?;
            Ok(Atom::Cx { control, target, sign: -1 })
        }
        other => Err(format!("unknown gate {other:?}")),
    }
}
