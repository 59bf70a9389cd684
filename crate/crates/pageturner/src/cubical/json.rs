use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::boxword::{degeneracy_word, parse_degeneracy_word};
use super::set::{Cube, CubicalMap, CubicalSet};
use crate::{Error, Result};

fn cube_json(k: &CubicalSet, c: Cube) -> Value {
    json!([degeneracy_word(c.dim as usize, c.keep), k.name(c)])
}

fn parse_cube(k: &CubicalSet, v: &Value, dim: usize) -> Result<Cube> {
    let bad = || Error::input(format!("expected [word, id], got {v}"));
    let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
    let (word, id) = (arr[0].as_str().ok_or_else(bad)?, arr[1].as_str().ok_or_else(bad)?);
    let keep = parse_degeneracy_word(word, dim)?;
    let g = k.find(id).ok_or_else(|| Error::input(format!("unknown cube id '{id}'")))?;
    if g.dim as u32 != keep.count_ones() {
        return Err(Error::input(format!("'{id}' has dimension {} but '{word}' needs {}", g.dim, keep.count_ones())));
    }
    Ok(Cube { dim: dim as u8, keep, gen: g.gen })
}

pub fn cubical_set_to_json(k: &CubicalSet) -> Value {
    let mut cubes = BTreeMap::new();
    let mut faces = BTreeMap::new();
    for n in 0..k.counts().len() {
        cubes.insert(n.to_string(), json!(k.names(n)));
        for (x, name) in k.names(n).iter().enumerate() {
            if n == 0 {
                continue;
            }
            let mut fs = BTreeMap::new();
            for i in 0..n {
                for e in 0..2 {
                    fs.insert(format!("{},{e}", i + 1), cube_json(k, k.face(n, x, i, e)));
                }
            }
            faces.insert(name.clone(), fs);
        }
    }
    json!({ "cubes": cubes, "faces": faces })
}

pub fn cubical_set_from_json(v: &Value) -> Result<CubicalSet> {
    let cubes = v.get("cubes").and_then(Value::as_object).ok_or_else(|| Error::input("missing 'cubes' object"))?;
    let mut names: Vec<Vec<String>> = Vec::new();
    for (d, ids) in cubes {
        let d: usize = d.parse().map_err(|_| Error::input(format!("bad dimension key '{d}'")))?;
        if d >= 31 {
            return Err(Error::input("dimension too large"));
        }
        let ids = ids.as_array().ok_or_else(|| Error::input("cube lists must be arrays"))?;
        if names.len() <= d {
            names.resize(d + 1, Vec::new());
        }
        for id in ids {
            names[d].push(id.as_str().ok_or_else(|| Error::input("cube ids must be strings"))?.to_string());
        }
    }
    // names alone, to resolve face targets
    let shell = CubicalSet::from_parts_unchecked(names.clone(), vec![Vec::new(); names.len()]);
    let empty = Map::new();
    let faces_v = v.get("faces").and_then(Value::as_object).unwrap_or(&empty);
    let mut faces = vec![Vec::new(); names.len()];
    for n in 1..names.len() {
        for id in &names[n] {
            let fv = faces_v
                .get(id)
                .and_then(Value::as_object)
                .ok_or_else(|| Error::input(format!("no faces for '{id}'")))?;
            let mut fs = Vec::with_capacity(2 * n);
            for i in 1..=n {
                for e in 0..2 {
                    let key = format!("{i},{e}");
                    let t = fv.get(&key).ok_or_else(|| Error::input(format!("'{id}' lacks face {key}")))?;
                    fs.push(parse_cube(&shell, t, n - 1)?);
                }
            }
            faces[n].push(fs);
        }
    }
    CubicalSet::new(names, faces)
}

pub fn cubical_map_to_json(src: &CubicalSet, dst: &CubicalSet, f: &CubicalMap) -> Value {
    let mut out = BTreeMap::new();
    for (n, x) in src.gens() {
        out.insert(src.names(n)[x].clone(), cube_json(dst, f.image(n, x)));
    }
    json!(out)
}

pub fn cubical_map_from_json(src: &CubicalSet, dst: &CubicalSet, v: &Value) -> Result<CubicalMap> {
    let obj = v.as_object().ok_or_else(|| Error::input("a cubical map is an object"))?;
    let mut images = vec![Vec::new(); src.counts().len()];
    for (n, x) in src.gens() {
        let id = &src.names(n)[x];
        let t = obj.get(id).ok_or_else(|| Error::input(format!("map has no image for '{id}'")))?;
        images[n].push(parse_cube(dst, t, n)?);
    }
    CubicalMap::new(src, dst, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::{boundary, mapr_interval, standard_cube};

    #[test]
    fn round_trip() {
        for k in [standard_cube(2), boundary(3).unwrap().0, mapr_interval(&standard_cube(1)).set, CubicalSet::empty()] {
            let v = cubical_set_to_json(&k);
            assert_eq!(cubical_set_from_json(&v).unwrap(), k);
            assert_eq!(serde_json::to_string(&v).unwrap(), serde_json::to_string(&cubical_set_to_json(&k)).unwrap());
        }
    }

    #[test]
    fn degenerate_faces_serialise_with_words() {
        // a square whose side x=0 is collapsed onto the vertex a
        let v = json!({
            "cubes": {"0": ["a", "b", "c"], "1": ["e", "f", "g"], "2": ["s"]},
            "faces": {
                "e": {"1,0": ["", "a"], "1,1": ["", "b"]},
                "f": {"1,0": ["", "a"], "1,1": ["", "c"]},
                "g": {"1,0": ["", "b"], "1,1": ["", "c"]},
                "s": {"1,0": ["s1", "a"], "1,1": ["", "g"], "2,0": ["", "e"], "2,1": ["", "f"]}
            }
        });
        let k = cubical_set_from_json(&v).unwrap();
        assert_eq!(cubical_set_to_json(&k), v);
        let mut bad = v.clone();
        bad["faces"]["s"]["2,1"] = json!(["", "g"]);
        assert!(cubical_set_from_json(&bad).is_err());
    }

    #[test]
    fn maps_round_trip() {
        let (b, inc) = boundary(2).unwrap();
        let sq = standard_cube(2);
        let v = cubical_map_to_json(&b, &sq, &inc);
        assert_eq!(cubical_map_from_json(&b, &sq, &v).unwrap(), inc);
    }

    #[test]
    fn rejects_bad_input() {
        let v = json!({"cubes": {"0": ["a"], "1": ["e"]}, "faces": {"e": {"1,0": ["", "a"], "1,1": ["", "b"]}}});
        assert!(cubical_set_from_json(&v).is_err());
        let v = json!({"cubes": {"0": ["a", "a"]}});
        assert!(cubical_set_from_json(&v).is_err());
    }
}
