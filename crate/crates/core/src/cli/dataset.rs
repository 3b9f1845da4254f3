//! Bundled q-expansion data and the displayed computations they reproduce.

use std::collections::BTreeMap;

use num_rational::BigRational;
use thiserror::Error;

use super::qexpfile::{parse_qexp_str, LabeledSeries, QExpFileError};
use crate::poly::MPoly;
use crate::qexp::{qexp_add, QExpError, QExpansion};

const GAMMA0_30: &str = include_str!("../../data/gamma0_30.qexp");
const GAMMA0_63: &str = include_str!("../../data/gamma0_63.qexp");
const GAMMA0_64: &str = include_str!("../../data/gamma0_64.qexp");
const GAMMA0_72: &str = include_str!("../../data/gamma0_72.qexp");

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("unknown dataset `{0}` (bundled: 30, 63, 64, 72)")]
    Unknown(String),
    #[error(transparent)]
    File(#[from] QExpFileError),
    #[error("dataset mixes (N, weight) = {0:?} and {1:?}")]
    Inconsistent((u64, i64), (u64, i64)),
    #[error("dataset is empty")]
    Empty,
    #[error("bad form selection `{0}`: {1}")]
    Selection(String, String),
    #[error(transparent)]
    Series(#[from] QExpError),
}

/// Named expansions sharing one level and weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub label: String,
    pub level: u64,
    pub weight: i64,
    pub series: Vec<LabeledSeries>,
}

impl Dataset {
    pub fn from_series(label: &str, series: Vec<LabeledSeries>) -> Result<Self, DatasetError> {
        let first = series.first().ok_or(DatasetError::Empty)?;
        let key = (first.series.level(), first.series.weight());
        for s in &series {
            let k = (s.series.level(), s.series.weight());
            if k != key {
                return Err(DatasetError::Inconsistent(key, k));
            }
        }
        Ok(Dataset {
            label: label.to_string(),
            level: key.0,
            weight: key.1,
            series,
        })
    }

    pub fn from_text(label: &str, text: &str) -> Result<Self, DatasetError> {
        Self::from_series(label, parse_qexp_str(text)?)
    }

    pub fn bundled(name: &str) -> Result<Self, DatasetError> {
        let text = match name.trim_start_matches("gamma0_") {
            "30" => GAMMA0_30,
            "63" => GAMMA0_63,
            "64" => GAMMA0_64,
            "72" => GAMMA0_72,
            _ => return Err(DatasetError::Unknown(name.to_string())),
        };
        Self::from_text(
            &format!("gamma0_{}", name.trim_start_matches("gamma0_")),
            text,
        )
    }

    pub fn labels(&self) -> Vec<&str> {
        self.series.iter().map(|s| s.label.as_str()).collect()
    }

    pub fn get(&self, label: &str) -> Option<&QExpansion> {
        self.series
            .iter()
            .find(|s| s.label == label)
            .map(|s| &s.series)
    }

    /// Evaluates an integer linear combination such as `f3+f4` or `2*f0-f1`.
    pub fn combination(&self, expr: &str) -> Result<QExpansion, DatasetError> {
        let labels = self.labels();
        let bad = |msg: &str| DatasetError::Selection(expr.to_string(), msg.to_string());
        let p = MPoly::parse(expr, &labels).map_err(|e| bad(&e.to_string()))?;
        let mut acc: Option<QExpansion> = None;
        for (e, c) in p.terms() {
            let Some(i) = e.iter().position(|&x| x == 1) else {
                return Err(bad("constant term"));
            };
            if e.iter().sum::<u32>() != 1 {
                return Err(bad("not linear"));
            }
            let term = self.series[i]
                .series
                .scale(&BigRational::from_integer(c.clone()));
            acc = Some(match acc {
                None => term,
                Some(a) => qexp_add(&a, &term)?,
            });
        }
        acc.ok_or_else(|| bad("zero combination"))
    }

    /// Resolves a comma-separated triple `f,g,h`.
    pub fn triple(&self, forms: &str) -> Result<[QExpansion; 3], DatasetError> {
        let parts: Vec<&str> = forms.split(',').map(str::trim).collect();
        let [f, g, h] = parts.as_slice() else {
            return Err(DatasetError::Selection(
                forms.to_string(),
                "expected three comma-separated forms".to_string(),
            ));
        };
        Ok([
            self.combination(f)?,
            self.combination(g)?,
            self.combination(h)?,
        ])
    }

    /// Replaces one coefficient; used for fault-injection runs.
    pub fn with_coefficient(
        &self,
        label: &str,
        exponent: i64,
        value: BigRational,
    ) -> Result<Self, DatasetError> {
        let mut out = self.clone();
        let slot = out
            .series
            .iter_mut()
            .find(|s| s.label == label)
            .ok_or_else(|| {
                DatasetError::Selection(label.to_string(), "no such form".to_string())
            })?;
        let s = &slot.series;
        let mut terms: BTreeMap<i64, BigRational> =
            s.terms().map(|(e, c)| (e, c.clone())).collect();
        terms.insert(exponent, value);
        slot.series = QExpansion::new(s.level(), s.weight(), s.prec(), terms)?;
        Ok(out)
    }
}

pub const BUNDLED: [&str; 4] = ["30", "63", "64", "72"];

/// A bundled relation computation with its expected outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleCase {
    pub name: &'static str,
    pub dataset: &'static str,
    pub forms: &'static str,
    pub maxdeg: u32,
    pub relation: &'static str,
    pub q: Option<&'static str>,
    pub qtilde: Option<&'static str>,
    pub group: &'static str,
    pub certificate: Option<&'static str>,
    /// Whether deg_T(Q) equals [ℚ(X₀(N)) : ℚ(g/f)].
    pub full_degree: Option<bool>,
}

/// A displayed Q with no bundled expansions behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisplayedCase {
    pub name: &'static str,
    pub level: u64,
    pub weight: i64,
    pub q: &'static str,
    pub qtilde: &'static str,
    pub group: &'static str,
    pub birational: bool,
}

/// The weight-2 conic attached to the three deepest forms of a
/// hyperelliptic level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicCase {
    pub name: &'static str,
    pub dataset: &'static str,
    pub basis: &'static [&'static str],
    pub conic: &'static str,
}

pub const CONIC_30: ConicCase = ConicCase {
    name: "gamma0_30 conic",
    dataset: "30",
    basis: &["f0", "f1", "f2"],
    conic: "-x1^2 + x0*x2 - x1*x2",
};

pub const DISPLAYED_30: DisplayedCase = DisplayedCase {
    name: "gamma0_30 weight 4",
    level: 30,
    weight: 4,
    q: "225 l^6 (1 - l - l^2 + l^3) T^2 \
        - l^3 (237 - 370 l + 319 l^2 + 341 l^3 - 310 l^4 - 101 l^5 + 400 l^6 - 10 l^7 - 64 l^8 + 32 l^9) T \
        + 12 - 44 l - 85 l^2 + 153 l^3 + 1073 l^4 + 1375 l^5 - 420 l^6 - 660 l^7 - 30 l^8 \
        + 162 l^9 - 26 l^10 - 118 l^11 + 84 l^12 + 20 l^13 + 12 l^14 - 4 l^15",
    qtilde: "T^2 \
        - l^3 (237 - 370 l + 319 l^2 + 341 l^3 - 310 l^4 - 101 l^5 + 400 l^6 - 10 l^7 - 64 l^8 + 32 l^9) T \
        + 225 l^6 (1 - l - l^2 + l^3) (12 - 44 l - 85 l^2 + 153 l^3 + 1073 l^4 + 1375 l^5 - 420 l^6 \
        - 660 l^7 - 30 l^8 + 162 l^9 - 26 l^10 - 118 l^11 + 84 l^12 + 20 l^13 + 12 l^14 - 4 l^15)",
    group: "S(2)",
    birational: true,
};

pub const TRIPLE_CASES: [TripleCase; 5] = [
    TripleCase {
        name: "gamma0_63",
        dataset: "63",
        forms: "f,g,h",
        maxdeg: 8,
        relation: "-2 h^4 f^2 - h f^5 + h^5 g + 2 h^2 f^3 g + h^3 f g^2 - f^4 g^2 + 3 h f^2 g^3 - 3 h^2 g^4",
        q: Some("l T^5 - 2 T^4 + l^2 T^3 + (2 l - 3 l^4) T^2 + (3 l^3 - 1) T - l^2"),
        qtilde: Some(
            "T^5 - 2 T^4 + l^3 T^3 + (2 l - 3 l^4) l^2 T^2 + (3 l^3 - 1) l^3 T - l^6",
        ),
        group: "S(5)",
        full_degree: Some(true),
        certificate: None,
    },
    TripleCase {
        name: "gamma0_64",
        dataset: "64",
        forms: "f,g,h",
        maxdeg: 8,
        relation: "-f^4 + h^3 g + 4 h g^3",
        q: Some("l T^3 + 4 l^3 T - 1"),
        qtilde: None,
        group: "S(3)",
        full_degree: Some(true),
        certificate: None,
    },
    TripleCase {
        name: "gamma0_72 h=f3",
        dataset: "72",
        forms: "f0,f1,f3",
        maxdeg: 8,
        relation: "f^7 + 7f^4g^3 - 8fg^6 - f^5h^2 - 8f^2g^3h^2 + g^3h^4",
        q: None,
        qtilde: Some("T^4 - l^3 (1 + 8 l^3) T^2 + l^9 (1 + 7 l^3 - 8 l^6)"),
        group: "D(4)",
        full_degree: Some(true),
        certificate: Some("even-polynomial-exclusion"),
    },
    TripleCase {
        name: "gamma0_72 h=f3+f4",
        dataset: "72",
        forms: "f0,f1,f3+f4",
        maxdeg: 8,
        relation: "f^8 - f^7g + 8f^5g^3 - 7f^4g^4 + 8fg^7 - 16g^8 - 2f^5g^2h + 8f^3g^4h \
                   - 16f^2g^5h + 32g^7h - f^6h^2 + f^5gh^2 - 8f^3g^3h^2 + 8f^2g^4h^2 \
                   - 24g^6h^2 + 2f^3g^2h^3 + 8g^5h^3 - g^4h^4",
        q: None,
        qtilde: Some(
            "-l^12 (1 - l + 8 l^3 - 7 l^4 + 8 l^7 - 16 l^8) \
             + l^8 (2 l^2 + 8 l^4 - 16 l^5 + 32 l^7) T \
             - l^4 (-1 + l - 8 l^3 + 8 l^4 - 24 l^6) T^2 + (2 l^2 + 8 l^5) T^3 + T^4",
        ),
        group: "S(4)",
        full_degree: Some(true),
        certificate: None,
    },
    TripleCase {
        name: "gamma0_72 h=f2",
        dataset: "72",
        forms: "f0,f1,f2",
        maxdeg: 8,
        relation: "-f^2h + gh^2 - 2fg^2",
        q: Some("l T^2 - T - 2 l^2"),
        qtilde: Some("T^2 - T - 2 l^3"),
        group: "S(2)",
        full_degree: Some(false),
        certificate: None,
    },
];

pub fn triple_case(name: &str) -> Option<&'static TripleCase> {
    TRIPLE_CASES.iter().find(|c| c.name == name)
}
