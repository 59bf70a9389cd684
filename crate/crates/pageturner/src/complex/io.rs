//! JSON form of filtered complexes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::chain::{ChainComplex, ChainMap};
use super::filtered::{Below, FilteredComplex, FilteredMap};
use crate::linalg::Mat;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    #[serde(default)]
    pub ranks: BTreeMap<i32, usize>,
    #[serde(default)]
    pub d: BTreeMap<i32, Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FilteredJson {
    pub window: [i32; 2],
    #[serde(default = "default_below")]
    pub below: Below,
    pub levels: BTreeMap<i32, ComplexJson>,
    #[serde(default)]
    pub maps: BTreeMap<i32, BTreeMap<i32, Vec<Vec<i64>>>>,
}

fn default_below() -> Below {
    Below::Zero
}

fn matrix(rows: &[Vec<i64>], r: usize, c: usize, what: &str) -> Result<Mat> {
    if rows.is_empty() && r == 0 {
        return Ok(Mat::zeros(0, c));
    }
    let m = Mat::from_nested(rows, c).ok_or_else(|| Error::input(format!("{what}: ragged or mis-sized rows")))?;
    if m.rows() != r {
        return Err(Error::input(format!("{what}: expected {r} rows, found {}", m.rows())));
    }
    Ok(m)
}

impl ComplexJson {
    pub fn from_complex(c: &ChainComplex) -> ComplexJson {
        ComplexJson {
            ranks: c.ranks().clone(),
            d: c.differentials().iter().map(|(&k, m)| (k, m.to_nested())).collect(),
        }
    }

    pub fn to_complex(&self) -> Result<ChainComplex> {
        let rank = |k: i32| self.ranks.get(&k).copied().unwrap_or(0);
        let mut d = BTreeMap::new();
        for (&k, rows) in &self.d {
            d.insert(k, matrix(rows, rank(k - 1), rank(k), &format!("differential in degree {k}"))?);
        }
        ChainComplex::new(self.ranks.clone(), d)
    }
}

impl FilteredJson {
    pub fn from_filtered(x: &FilteredComplex) -> FilteredJson {
        if x.is_empty_window() {
            return FilteredJson { window: [0, -1], below: x.below(), levels: BTreeMap::new(), maps: BTreeMap::new() };
        }
        let levels = (x.lo()..=x.hi()).map(|m| (m, ComplexJson::from_complex(x.level(m)))).collect();
        let maps = (x.lo()..x.hi())
            .map(|m| (m, x.map(m).matrices().iter().map(|(&k, a)| (k, a.to_nested())).collect()))
            .collect();
        FilteredJson { window: [x.lo(), x.hi()], below: x.below(), levels, maps }
    }

    pub fn to_filtered(&self) -> Result<FilteredComplex> {
        let [lo, hi] = self.window;
        if hi < lo {
            return Ok(FilteredComplex::zero());
        }
        let mut levels = Vec::new();
        for m in lo..=hi {
            let c = self.levels.get(&m).ok_or_else(|| Error::input(format!("missing level {m}")))?;
            levels.push(c.to_complex()?);
        }
        for &m in self.levels.keys() {
            if m < lo || m > hi {
                return Err(Error::input(format!("level {m} lies outside the window")));
            }
        }
        let mut maps = Vec::new();
        for m in lo..hi {
            let (a, b) = (&levels[(m - lo) as usize], &levels[(m - lo + 1) as usize]);
            let mut mats = BTreeMap::new();
            if let Some(entries) = self.maps.get(&m) {
                for (&k, rows) in entries {
                    mats.insert(k, matrix(rows, b.rank(k), a.rank(k), &format!("structure map {m} in degree {k}"))?);
                }
            }
            maps.push(ChainMap::new(a, b, mats)?);
        }
        FilteredComplex::new(lo, self.below, levels, maps)
    }
}

pub fn filtered_from_json(s: &str) -> Result<FilteredComplex> {
    let j: FilteredJson = serde_json::from_str(s).map_err(|e| Error::input(format!("filtered complex JSON: {e}")))?;
    j.to_filtered()
}

pub fn filtered_to_json(x: &FilteredComplex) -> String {
    serde_json::to_string_pretty(&FilteredJson::from_filtered(x)).expect("plain data serializes")
}

/// `{"window": [lo, hi], "maps": {m: {degree: rows}}}`; levels outside the window use the nearest stored map.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FilteredMapJson {
    pub window: [i32; 2],
    #[serde(default)]
    pub maps: BTreeMap<i32, BTreeMap<i32, Vec<Vec<i64>>>>,
}

pub fn filtered_map_from_json(src: &FilteredComplex, dst: &FilteredComplex, s: &str) -> Result<FilteredMap> {
    let j: FilteredMapJson = serde_json::from_str(s).map_err(|e| Error::input(format!("filtered map JSON: {e}")))?;
    let [lo, hi] = j.window;
    if hi < lo {
        return Ok(FilteredMap::zero());
    }
    let mut maps = Vec::new();
    for m in lo..=hi {
        let (a, b) = (src.level(m), dst.level(m));
        let mut mats = BTreeMap::new();
        for (&k, rows) in j.maps.get(&m).into_iter().flatten() {
            mats.insert(k, matrix(rows, b.rank(k), a.rank(k), &format!("map at level {m} in degree {k}"))?);
        }
        maps.push(ChainMap::new(a, b, mats)?);
    }
    FilteredMap::new(src, dst, lo, maps)
}

pub fn filtered_map_to_json(f: &FilteredMap) -> String {
    let lo = f.lo();
    let maps: BTreeMap<i32, BTreeMap<i32, Vec<Vec<i64>>>> = f
        .stored()
        .iter()
        .enumerate()
        .map(|(i, g)| (lo + i as i32, g.matrices().iter().map(|(&k, a)| (k, a.to_nested())).collect()))
        .collect();
    let window = if maps.is_empty() { [0, -1] } else { [lo, lo + maps.len() as i32 - 1] };
    serde_json::to_string_pretty(&FilteredMapJson { window, maps }).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{mod_tau, sphere};

    #[test]
    fn round_trip() {
        let x = mod_tau(&sphere(1, 0)).direct_sum(&sphere(0, 2));
        let s = filtered_to_json(&x);
        let y = filtered_from_json(&s).unwrap();
        assert_eq!(x, y);
        assert_eq!(s, filtered_to_json(&y));
    }

    #[test]
    fn maps_round_trip() {
        let x = mod_tau(&sphere(1, 0));
        let t = x.tau();
        let sh = x.shift(1);
        let back = filtered_map_from_json(&x, &sh, &filtered_map_to_json(&t)).unwrap();
        for m in -1..4 {
            assert_eq!(back.at(m), t.at(m));
        }
    }

    #[test]
    fn rejects_bad_square() {
        let s = r#"{"window":[0,0],"levels":{"0":{"ranks":{"0":1,"1":1,"2":1},"d":{"1":[[1]],"2":[[1]]}}}}"#;
        assert!(filtered_from_json(s).is_err());
    }
}
