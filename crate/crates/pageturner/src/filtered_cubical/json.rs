use serde_json::{json, Map, Value};

use super::filtered::{FilteredCubicalMap, FilteredCubicalSet};
use crate::cubical::{cubical_map_from_json, cubical_map_to_json, cubical_set_from_json, cubical_set_to_json};
use crate::{Error, Result};

fn window(v: &Value) -> Result<(i32, i32)> {
    let bad = || Error::input("'window' must be [lo, hi] with lo ≤ hi");
    let w = v.get("window").and_then(Value::as_array).filter(|a| a.len() == 2).ok_or_else(bad)?;
    let lo = w[0].as_i64().ok_or_else(bad)?;
    let hi = w[1].as_i64().ok_or_else(bad)?;
    if lo > hi || hi - lo > 1000 || lo.abs() > 1 << 20 {
        return Err(bad());
    }
    Ok((lo as i32, hi as i32))
}

fn entry<'a>(v: &'a Value, key: &str, m: i32) -> Result<&'a Value> {
    v.get(key)
        .and_then(|o| o.get(m.to_string()))
        .ok_or_else(|| Error::input(format!("missing '{key}' entry for level {m}")))
}

/// `{"window": [lo, hi], "levels": {i: set}, "maps": {i: map X^i → X^{i+1}}}`.
pub fn filtered_to_json(x: &FilteredCubicalSet) -> Value {
    let mut levels = Map::new();
    let mut maps = Map::new();
    for m in x.lo()..=x.hi() {
        levels.insert(m.to_string(), cubical_set_to_json(x.level(m)));
        if m < x.hi() {
            maps.insert(m.to_string(), cubical_map_to_json(x.level(m), x.level(m + 1), &x.map(m)));
        }
    }
    json!({ "window": [x.lo(), x.hi()], "levels": levels, "maps": maps })
}

pub fn filtered_from_json(v: &Value) -> Result<FilteredCubicalSet> {
    let (lo, hi) = window(v)?;
    let levels = (lo..=hi).map(|m| cubical_set_from_json(entry(v, "levels", m)?)).collect::<Result<Vec<_>>>()?;
    let maps = (lo..hi)
        .map(|m| {
            let i = (m - lo) as usize;
            cubical_map_from_json(&levels[i], &levels[i + 1], entry(v, "maps", m)?)
        })
        .collect::<Result<Vec<_>>>()?;
    FilteredCubicalSet::new(lo, levels, maps)
}

/// `{"window": [lo, hi], "maps": {i: map at level i}}`.
pub fn filtered_map_to_json(src: &FilteredCubicalSet, dst: &FilteredCubicalSet, f: &FilteredCubicalMap) -> Value {
    let (lo, hi) = (src.lo(), src.hi().max(dst.hi()));
    let mut maps = Map::new();
    for m in lo..=hi {
        maps.insert(m.to_string(), cubical_map_to_json(src.level(m), dst.level(m), &f.at(m)));
    }
    json!({ "window": [lo, hi], "maps": maps })
}

pub fn filtered_map_from_json(
    src: &FilteredCubicalSet,
    dst: &FilteredCubicalSet,
    v: &Value,
) -> Result<FilteredCubicalMap> {
    let (lo, hi) = window(v)?;
    let maps = (lo..=hi)
        .map(|m| cubical_map_from_json(src.level(m), dst.level(m), entry(v, "maps", m)?))
        .collect::<Result<Vec<_>>>()?;
    FilteredCubicalMap::new(src, dst, lo, maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::{boundary, standard_cube};
    use crate::filtered_cubical::{free_filtered, skeletal_filtration, tau};

    #[test]
    fn round_trip() {
        for x in [
            skeletal_filtration(&standard_cube(2)),
            free_filtered(-1, &boundary(2).unwrap().0),
            FilteredCubicalSet::empty(),
        ] {
            let v = filtered_to_json(&x);
            assert_eq!(filtered_from_json(&v).unwrap(), x);
        }
    }

    #[test]
    fn maps_round_trip() {
        let x = skeletal_filtration(&standard_cube(1));
        let t = tau(&x);
        let sh = x.shift(1);
        let v = filtered_map_to_json(&x, &sh, &t);
        let back = filtered_map_from_json(&x, &sh, &v).unwrap();
        for m in -1..3 {
            assert_eq!(back.at(m), t.at(m));
        }
    }

    #[test]
    fn rejects_bad_windows() {
        assert!(filtered_from_json(&json!({"window": [2, 1], "levels": {}, "maps": {}})).is_err());
        assert!(filtered_from_json(&json!({"window": [0, 1], "levels": {"0": {"cubes": {}}}, "maps": {}})).is_err());
    }
}
