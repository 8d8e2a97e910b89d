//! Built-in model scenarios for `tvd models`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{pauli, random_hermitian, ComplexMatrix, StateVector, C64};
use crate::models::{
    edm_model, kaon_decay_scattering_model, kaon_oscillation_model, symmetrize_invariant, t_symmetric_smatrix,
    KaonModel,
};
use crate::scenario_io::{MatrixName, Request, Scenario};
use crate::symmetry::SymmetryTransform;
use crate::tolerance::Tolerances;

pub const MODEL_NAMES: [&str; 5] = ["kaon-decay", "kaon-oscillation", "edm", "t-symmetric-s", "kramers"];

/// `key=value` pairs with typed accessors; every key must be consumed.
pub struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    pub fn parse(pairs: &[String]) -> Result<Self> {
        let mut values = BTreeMap::new();
        for pair in pairs {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got {pair:?}")))?;
            if values.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(Error::InvalidParameter(format!("parameter {k:?} given twice")));
            }
        }
        Ok(Self { values })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.values.remove(key)
    }

    fn real(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => parse_real(&v).ok_or_else(|| bad(key, &v)),
        }
    }

    fn integer(&mut self, key: &str, default: u64) -> Result<u64> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| bad(key, &v)),
        }
    }

    fn complex(&mut self, key: &str, default: C64) -> Result<C64> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => parse_complex(&v).ok_or_else(|| bad(key, &v)),
        }
    }

    fn finish(self, model: &str) -> Result<()> {
        match self.values.keys().next() {
            None => Ok(()),
            Some(k) => Err(Error::InvalidParameter(format!(
                "unknown parameter {k:?} for model {model}"
            ))),
        }
    }
}

fn bad(key: &str, value: &str) -> Error {
    Error::InvalidParameter(format!("cannot parse {key}={value}"))
}

/// Decimal or `p/q`.
fn parse_real(s: &str) -> Option<f64> {
    let x = match s.split_once('/') {
        Some((p, q)) => p.trim().parse::<f64>().ok()? / q.trim().parse::<f64>().ok()?,
        None => s.parse().ok()?,
    };
    x.is_finite().then_some(x)
}

/// `a`, `bi`, `a+bi` or `a-bi`; a bare `i` means one.
fn parse_complex(s: &str) -> Option<C64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('i') else {
        return parse_real(&s).map(|re| C64::new(re, 0.0));
    };
    // Split at the last sign that is not the leading one or part of an exponent.
    let split = body
        .char_indices()
        .filter(|&(k, c)| (c == '+' || c == '-') && k > 0 && !matches!(body.as_bytes()[k - 1], b'e' | b'E'))
        .map(|(k, _)| k)
        .next_back();
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other)?,
    };
    Some(C64::new(re, im))
}

fn field_direction(s: &str) -> Option<[f64; 3]> {
    match s {
        "x" => Some([1.0, 0.0, 0.0]),
        "y" => Some([0.0, 1.0, 0.0]),
        "z" => Some([0.0, 0.0, 1.0]),
        _ => {
            let parts: Vec<f64> = s.split(',').map(parse_real).collect::<Option<_>>()?;
            <[f64; 3]>::try_from(parts).ok()
        }
    }
}

pub fn build_model(name: &str, pairs: &[String]) -> Result<Scenario> {
    let mut p = Params::parse(pairs)?;
    let scenario = match name {
        "kaon-decay" => kaon_decay(p.real("eps", 0.2)?)?,
        "kaon-oscillation" => kaon_oscillation(
            p.real("m1", 1.0)?,
            p.real("m2", 2.0)?,
            p.complex("w", C64::new(0.0, 1.0))?,
            p.real("t", 1.0)?,
        )?,
        "edm" => {
            let j = p.real("j", 0.5)?;
            let h0 = p.real("h0", 1.0)?;
            let g = p.real("g", 1.0)?;
            let e = match p.take("E") {
                None => [0.0, 0.0, 1.0],
                Some(v) => field_direction(&v).ok_or_else(|| bad("E", &v))?,
            };
            let d = p.real("d", 1.0)?;
            edm(j, h0, g, e, d)?
        }
        "t-symmetric-s" => t_symmetric(p.integer("dim", 3)? as usize, p.integer("seed", 0)?)?,
        "kramers" => kramers(p.integer("dim", 4)? as usize, p.integer("seed", 0)?)?,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown model {other:?}; expected one of {}",
                MODEL_NAMES.join(", ")
            )))
        }
    };
    p.finish(name)?;
    Ok(scenario)
}

fn kaon_decay(eps: f64) -> Result<Scenario> {
    let m = kaon_decay_scattering_model(eps)?;
    let mut s = Scenario::new(2);
    s.matrices.smatrix = Some(m.smatrix);
    s.symmetries.push(m.cp);
    s.states.insert("k_long".into(), m.k_long);
    s.states.insert("two_pion".into(), m.two_pion);
    s.requests = vec![
        Request::ScatteringCurie {
            symmetry: "CP".into(),
            state_in: "k_long".into(),
            state_out: "two_pion".into(),
        },
        Request::InvarianceMargin {
            symmetry: "CP".into(),
            matrix: Some(MatrixName::Smatrix),
        },
    ];
    Ok(s)
}

fn kaon_oscillation(m1: f64, m2: f64, w: C64, t: f64) -> Result<Scenario> {
    if !(m1.is_finite() && m2.is_finite() && w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::InvalidParameter("non-finite kaon parameter".into()));
    }
    let m = kaon_oscillation_model(m1, m2, w);
    let mut s = Scenario::new(2);
    s.matrices.hamiltonian = Some(m.hamiltonian);
    s.symmetries.push(m.t_conv);
    s.states.insert("k0".into(), KaonModel::k0());
    s.states.insert("k0_bar".into(), KaonModel::k0_bar());
    s.states.insert("k1".into(), KaonModel::k1());
    s.states.insert("k2".into(), KaonModel::k2());
    let h = Some(MatrixName::Hamiltonian);
    s.requests = vec![
        Request::Kabir {
            symmetry: "T".into(),
            state_in: "k0".into(),
            state_out: "k0_bar".into(),
            matrix: h,
            t: Some(t),
        },
        Request::ProbabilityAsymmetry {
            state_a: "k0".into(),
            state_b: "k0_bar".into(),
            matrix: h,
            t: Some(t),
        },
        Request::InvarianceMargin {
            symmetry: "T".into(),
            matrix: None,
        },
        Request::TimeReversalConsistency {
            symmetry: "T".into(),
            t,
            matrix: None,
        },
        Request::Wigner {
            symmetry: "T".into(),
            matrix: None,
            gap_tol: None,
        },
    ];
    Ok(s)
}

fn edm(j: f64, h0: f64, g: f64, e: [f64; 3], d: f64) -> Result<Scenario> {
    let m = edm_model(j, h0, g, e, d)?;
    let mut s = Scenario::new(m.spin.dim());
    let zero = m.hamiltonian.frobenius_norm() <= Tolerances::default().tau_zero;
    s.matrices.hamiltonian = Some(m.hamiltonian);
    s.symmetries.push(m.spin.t_conv);
    s.requests.push(Request::InvarianceMargin {
        symmetry: "T".into(),
        matrix: None,
    });
    // Spectral detectors have nothing to say about the zero operator.
    if !zero {
        s.requests.push(Request::Wigner {
            symmetry: "T".into(),
            matrix: None,
            gap_tol: None,
        });
        s.requests.push(Request::KramersVerify {
            symmetry: "T".into(),
            matrix: None,
            gap_tol: None,
        });
    }
    Ok(s)
}

fn basis_states(s: &mut Scenario, dim: usize) {
    for k in 0..dim {
        s.states.insert(format!("e{}", k + 1), StateVector::basis(dim, k));
    }
}

fn t_symmetric(dim: usize, seed: u64) -> Result<Scenario> {
    if !(1..=16).contains(&dim) {
        return Err(Error::InvalidParameter(format!("dim must lie in 1..=16, got {dim}")));
    }
    let mut s = Scenario::new(dim);
    s.seed = Some(seed);
    s.matrices.smatrix = Some(t_symmetric_smatrix(dim, seed)?);
    s.symmetries.push(SymmetryTransform::conjugation(dim).with_label("T"));
    basis_states(&mut s, dim);
    for a in 0..dim {
        for b in a + 1..dim {
            let (a, b) = (format!("e{}", a + 1), format!("e{}", b + 1));
            s.requests.push(Request::Kabir {
                symmetry: "T".into(),
                state_in: a.clone(),
                state_out: b.clone(),
                matrix: None,
                t: None,
            });
            s.requests.push(Request::ProbabilityAsymmetry {
                state_a: a,
                state_b: b,
                matrix: None,
                t: None,
            });
        }
    }
    Ok(s)
}

/// Seeded Hamiltonian made invariant under `T = (iσy ⊗ I)K`, so `T² = −I`.
fn kramers(dim: usize, seed: u64) -> Result<Scenario> {
    if dim == 0 || !dim.is_multiple_of(2) || dim > 16 {
        return Err(Error::InvalidParameter(format!(
            "dim must be even and at most 16, got {dim}"
        )));
    }
    let t_op = SymmetryTransform::antiunitary("T", pauli::i_y().kron(&ComplexMatrix::identity(dim / 2)))?;
    let h = symmetrize_invariant(&random_hermitian(dim, seed)?, &t_op, &Tolerances::default())?;
    let mut s = Scenario::new(dim);
    s.seed = Some(seed);
    s.matrices.hamiltonian = Some(h);
    s.symmetries.push(t_op);
    s.requests = vec![
        Request::KramersVerify {
            symmetry: "T".into(),
            matrix: None,
            gap_tol: None,
        },
        Request::InvarianceMargin {
            symmetry: "T".into(),
            matrix: None,
        },
        Request::Wigner {
            symmetry: "T".into(),
            matrix: None,
            gap_tol: None,
        },
    ];
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn complex_literals() {
        let c = |re, im| Some(C64::new(re, im));
        assert_eq!(parse_complex("i"), c(0.0, 1.0));
        assert_eq!(parse_complex("-i"), c(0.0, -1.0));
        assert_eq!(parse_complex("2.5"), c(2.5, 0.0));
        assert_eq!(parse_complex("0.5+2i"), c(0.5, 2.0));
        assert_eq!(parse_complex("1e-3-1e-2i"), c(1e-3, -1e-2));
        assert_eq!(parse_complex("-1-i"), c(-1.0, -1.0));
        assert_eq!(parse_complex("x"), None);
    }

    #[test]
    fn fractions() {
        assert_eq!(parse_real("3/2"), Some(1.5));
        assert_eq!(parse_real("1/0"), None);
    }

    #[test]
    fn every_model_validates() {
        for name in MODEL_NAMES {
            let s = build_model(name, &[]).unwrap();
            s.validate().unwrap();
            assert!(!s.requests.is_empty(), "{name}");
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(build_model("edm", &args(&["j=0.3"])).is_err());
        assert!(build_model("edm", &args(&["E=w"])).is_err());
        assert!(build_model("edm", &args(&["q=1"])).is_err());
        assert!(build_model("edm", &args(&["g"])).is_err());
        assert!(build_model("kaon-decay", &args(&["eps=1"])).is_err());
        assert!(build_model("kramers", &args(&["dim=3"])).is_err());
        assert!(build_model("nope", &[]).is_err());
    }

    #[test]
    fn edm_field_triple() {
        let s = build_model("edm", &args(&["j=1", "E=1,0,1"])).unwrap();
        assert_eq!(s.dim, 3);
    }
}
