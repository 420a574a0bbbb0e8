//! Pearson chi-square tests at fixed significance levels.
//!
//! Critical values for 1..=120 degrees of freedom are tabulated; larger
//! degrees of freedom use the Wilson–Hilferty cube approximation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Significance {
    P05,
    P01,
    #[default]
    P001,
}

impl Significance {
    pub fn alpha(self) -> f64 {
        match self {
            Significance::P05 => 0.05,
            Significance::P01 => 0.01,
            Significance::P001 => 0.001,
        }
    }

    fn table(self) -> &'static [f64; 120] {
        match self {
            Significance::P05 => &ALPHA_05,
            Significance::P01 => &ALPHA_01,
            Significance::P001 => &ALPHA_001,
        }
    }

    /// Upper standard-normal quantile `z_{1-α}`.
    fn z(self) -> f64 {
        match self {
            Significance::P05 => 1.644_853_626_951_472_2,
            Significance::P01 => 2.326_347_874_040_840_8,
            Significance::P001 => 3.090_232_306_167_813_5,
        }
    }
}

impl fmt::Display for Significance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Significance::P05 => "0.05",
            Significance::P01 => "0.01",
            Significance::P001 => "0.001",
        };
        f.write_str(s)
    }
}

impl FromStr for Significance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0.05" => Ok(Significance::P05),
            "0.01" => Ok(Significance::P01),
            "0.001" => Ok(Significance::P001),
            other => Err(Error::Parse(format!(
                "significance must be 0.05, 0.01 or 0.001, got {other:?}"
            ))),
        }
    }
}

/// Upper critical value of the chi-square distribution.
pub fn critical_value(df: usize, significance: Significance) -> f64 {
    assert!(df >= 1, "chi-square needs at least one degree of freedom");
    if df <= 120 {
        significance.table()[df - 1]
    } else {
        wilson_hilferty(df, significance)
    }
}

pub fn wilson_hilferty(df: usize, significance: Significance) -> f64 {
    let k = df as f64;
    let t = 2.0 / (9.0 * k);
    let x = 1.0 - t + significance.z() * t.sqrt();
    k * x * x * x
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareResult {
    pub cells: usize,
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub critical: f64,
    pub significance: Significance,
    pub pass: bool,
}

impl ChiSquareResult {
    fn new(cells: usize, statistic: f64, df: usize, significance: Significance) -> Self {
        let critical = critical_value(df, significance);
        ChiSquareResult {
            cells,
            statistic,
            degrees_of_freedom: df,
            critical,
            significance,
            pass: statistic <= critical,
        }
    }

    /// Sums independent statistics (e.g. per stratum) into one test.
    pub fn combine(parts: &[ChiSquareResult], significance: Significance) -> Result<Self> {
        let df: usize = parts.iter().map(|p| p.degrees_of_freedom).sum();
        if df == 0 {
            return Err(Error::InsufficientSamples("no strata with degrees of freedom".into()));
        }
        let stat: f64 = parts.iter().map(|p| p.statistic).sum();
        let cells: usize = parts.iter().map(|p| p.cells).sum();
        Ok(ChiSquareResult::new(cells, stat, df, significance))
    }

    /// Key-value stanza: `name`, statistic, df, critical value, verdict.
    pub fn stanza(&self, name: &str) -> String {
        format!(
            "[{name}]\ncells = {}\nstatistic = {:.4}\ndf = {}\nsignificance = {}\ncritical = {:.4}\nresult = {}\n",
            self.cells,
            self.statistic,
            self.degrees_of_freedom,
            self.significance,
            self.critical,
            if self.pass { "pass" } else { "fail" }
        )
    }
}

/// Goodness of fit against the uniform distribution over `observed.len()`
/// cells.
pub fn uniform_goodness_of_fit(
    observed: &[u64],
    significance: Significance,
    min_expected: f64,
) -> Result<ChiSquareResult> {
    let cells = observed.len();
    if cells < 2 {
        return Err(Error::InsufficientSamples(format!("{cells} cell(s)")));
    }
    let total: u64 = observed.iter().sum();
    let expected = total as f64 / cells as f64;
    if expected < min_expected {
        return Err(Error::InsufficientSamples(format!(
            "expected count {expected:.2} per cell is below {min_expected}"
        )));
    }
    let stat = observed
        .iter()
        .map(|&o| {
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum();
    Ok(ChiSquareResult::new(cells, stat, cells - 1, significance))
}

/// Pearson independence test on a contingency table. Empty rows and columns
/// are dropped before counting degrees of freedom.
pub fn independence(
    table: &[Vec<u64>],
    significance: Significance,
    min_expected: f64,
) -> Result<ChiSquareResult> {
    let width = table.first().map(Vec::len).unwrap_or(0);
    if table.iter().any(|r| r.len() != width) {
        return Err(Error::Parse("ragged contingency table".into()));
    }
    let rows: Vec<&Vec<u64>> = table.iter().filter(|r| r.iter().sum::<u64>() > 0).collect();
    let col_sums: Vec<u64> = (0..width)
        .map(|j| rows.iter().map(|r| r[j]).sum())
        .collect();
    let cols: Vec<usize> = (0..width).filter(|&j| col_sums[j] > 0).collect();
    if rows.len() < 2 || cols.len() < 2 {
        return Err(Error::InsufficientSamples(format!(
            "{}x{} non-empty table",
            rows.len(),
            cols.len()
        )));
    }
    let total: u64 = col_sums.iter().sum();
    let mut stat = 0.0;
    for r in &rows {
        let rs: u64 = r.iter().sum();
        for &j in &cols {
            let e = rs as f64 * col_sums[j] as f64 / total as f64;
            if e < min_expected {
                return Err(Error::InsufficientSamples(format!(
                    "expected count {e:.2} below {min_expected}"
                )));
            }
            let d = r[j] as f64 - e;
            stat += d * d / e;
        }
    }
    let df = (rows.len() - 1) * (cols.len() - 1);
    Ok(ChiSquareResult::new(rows.len() * cols.len(), stat, df, significance))
}

/// Independence test over observed `(row key, column key)` pairs.
pub fn independence_of_pairs<A: Ord, B: Ord + Clone>(
    pairs: impl IntoIterator<Item = (A, B)>,
    significance: Significance,
    min_expected: f64,
) -> Result<ChiSquareResult> {
    let mut counts: BTreeMap<A, BTreeMap<B, u64>> = BTreeMap::new();
    for (a, b) in pairs {
        *counts.entry(a).or_default().entry(b).or_insert(0) += 1;
    }
    let col_keys: std::collections::BTreeSet<B> =
        counts.values().flat_map(|row| row.keys().cloned()).collect();
    let table: Vec<Vec<u64>> = counts
        .values()
        .map(|row| col_keys.iter().map(|b| row.get(b).copied().unwrap_or(0)).collect())
        .collect();
    independence(&table, significance, min_expected)
}

const ALPHA_05: [f64; 120] = [
    3.8415, 5.9915, 7.8147, 9.4877, 11.0705, 12.5916, 14.0671, 15.5073,
    16.9190, 18.3070, 19.6751, 21.0261, 22.3620, 23.6848, 24.9958, 26.2962,
    27.5871, 28.8693, 30.1435, 31.4104, 32.6706, 33.9244, 35.1725, 36.4150,
    37.6525, 38.8851, 40.1133, 41.3371, 42.5570, 43.7730, 44.9853, 46.1943,
    47.3999, 48.6024, 49.8018, 50.9985, 52.1923, 53.3835, 54.5722, 55.7585,
    56.9424, 58.1240, 59.3035, 60.4809, 61.6562, 62.8296, 64.0011, 65.1708,
    66.3386, 67.5048, 68.6693, 69.8322, 70.9935, 72.1532, 73.3115, 74.4683,
    75.6237, 76.7778, 77.9305, 79.0819, 80.2321, 81.3810, 82.5287, 83.6753,
    84.8206, 85.9649, 87.1081, 88.2502, 89.3912, 90.5312, 91.6702, 92.8083,
    93.9453, 95.0815, 96.2167, 97.3510, 98.4844, 99.6169, 100.7486, 101.8795,
    103.0095, 104.1387, 105.2672, 106.3948, 107.5217, 108.6479, 109.7733, 110.8980,
    112.0220, 113.1453, 114.2679, 115.3898, 116.5110, 117.6317, 118.7516, 119.8709,
    120.9896, 122.1077, 123.2252, 124.3421, 125.4584, 126.5741, 127.6893, 128.8039,
    129.9180, 131.0315, 132.1444, 133.2569, 134.3688, 135.4802, 136.5911, 137.7015,
    138.8114, 139.9208, 141.0297, 142.1382, 143.2461, 144.3537, 145.4607, 146.5674,
];

const ALPHA_01: [f64; 120] = [
    6.6349, 9.2103, 11.3449, 13.2767, 15.0863, 16.8119, 18.4753, 20.0902,
    21.6660, 23.2093, 24.7250, 26.2170, 27.6882, 29.1412, 30.5779, 31.9999,
    33.4087, 34.8053, 36.1909, 37.5662, 38.9322, 40.2894, 41.6384, 42.9798,
    44.3141, 45.6417, 46.9629, 48.2782, 49.5879, 50.8922, 52.1914, 53.4858,
    54.7755, 56.0609, 57.3421, 58.6192, 59.8925, 61.1621, 62.4281, 63.6907,
    64.9501, 66.2062, 67.4593, 68.7095, 69.9568, 71.2014, 72.4433, 73.6826,
    74.9195, 76.1539, 77.3860, 78.6158, 79.8433, 81.0688, 82.2921, 83.5134,
    84.7328, 85.9502, 87.1657, 88.3794, 89.5913, 90.8015, 92.0100, 93.2169,
    94.4221, 95.6257, 96.8278, 98.0284, 99.2275, 100.4252, 101.6214, 102.8163,
    104.0098, 105.2020, 106.3929, 107.5825, 108.7709, 109.9581, 111.1440, 112.3288,
    113.5124, 114.6949, 115.8763, 117.0565, 118.2357, 119.4139, 120.5910, 121.7671,
    122.9422, 124.1163, 125.2895, 126.4617, 127.6329, 128.8032, 129.9727, 131.1412,
    132.3089, 133.4757, 134.6416, 135.8067, 136.9710, 138.1345, 139.2971, 140.4590,
    141.6201, 142.7804, 143.9400, 145.0988, 146.2569, 147.4143, 148.5710, 149.7269,
    150.8822, 152.0367, 153.1906, 154.3438, 155.4964, 156.6483, 157.7995, 158.9502,
];

const ALPHA_001: [f64; 120] = [
    10.8276, 13.8155, 16.2662, 18.4668, 20.5150, 22.4577, 24.3219, 26.1245,
    27.8772, 29.5883, 31.2641, 32.9095, 34.5282, 36.1233, 37.6973, 39.2524,
    40.7902, 42.3124, 43.8202, 45.3147, 46.7970, 48.2679, 49.7282, 51.1786,
    52.6197, 54.0520, 55.4760, 56.8923, 58.3012, 59.7031, 61.0983, 62.4872,
    63.8701, 65.2472, 66.6188, 67.9852, 69.3465, 70.7029, 72.0547, 73.4020,
    74.7449, 76.0838, 77.4186, 78.7495, 80.0767, 81.4003, 82.7204, 84.0371,
    85.3506, 86.6608, 87.9680, 89.2722, 90.5734, 91.8718, 93.1675, 94.4605,
    95.7510, 97.0388, 98.3242, 99.6072, 100.8879, 102.1662, 103.4424, 104.7163,
    105.9881, 107.2579, 108.5256, 109.7913, 111.0551, 112.3169, 113.5769, 114.8351,
    116.0915, 117.3462, 118.5991, 119.8503, 121.1000, 122.3480, 123.5944, 124.8392,
    126.0826, 127.3244, 128.5648, 129.8037, 131.0412, 132.2773, 133.5121, 134.7455,
    135.9776, 137.2084, 138.4379, 139.6661, 140.8931, 142.1189, 143.3435, 144.5670,
    145.7892, 147.0104, 148.2304, 149.4493, 150.6671, 151.8838, 153.0995, 154.3141,
    155.5277, 156.7403, 157.9518, 159.1624, 160.3721, 161.5807, 162.7885, 163.9953,
    165.2011, 166.4061, 167.6102, 168.8133, 170.0156, 171.2171, 172.4177, 173.6174,
];
