//! Ingestion of the SNAP location-based social network files: a friendship
//! edge list and a check-in table `user  timestamp  lat  lon  location-id`.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::girg::stream_seed;
use crate::graph::{haversine_km, Metric, SpatialGraph, EARTH_RADIUS_KM};

/// Largest tolerated share of unparsable rows in an input file.
const MAX_MALFORMED: f64 = 0.01;

/// Side of the rounding box for home locations, in degrees.
const BOX_DEG: f64 = 0.25;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Checkins {
    /// `(lat, lon)` logins per user, in file order.
    pub users: BTreeMap<u64, Vec<[f64; 2]>>,
    pub rows: usize,
    pub malformed: usize,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

fn check_malformed(path: &Path, rows: usize, malformed: usize) -> Result<()> {
    if rows > 0 && malformed as f64 > MAX_MALFORMED * rows as f64 {
        return Err(Error::Validation(format!(
            "{}: {malformed} of {rows} rows are malformed",
            path.display()
        )));
    }
    if malformed > 0 {
        log::warn!("{}: skipped {malformed} malformed rows", path.display());
    }
    Ok(())
}

fn parse_checkin(line: &str) -> Option<(u64, [f64; 2])> {
    let mut f = line.split_whitespace();
    let user = f.next()?.parse().ok()?;
    let _timestamp = f.next()?;
    let lat: f64 = f.next()?.parse().ok()?;
    let lon: f64 = f.next()?.parse().ok()?;
    ((-90.0..=90.0).contains(&lat) && (-180.0..=180.0).contains(&lon)).then_some((user, [lat, lon]))
}

pub fn parse_checkins(path: &Path) -> Result<Checkins> {
    parse_checkins_from(open(path)?, path)
}

pub fn parse_checkins_from(reader: impl BufRead, path: &Path) -> Result<Checkins> {
    let mut out = Checkins::default();
    for line in reader.lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.rows += 1;
        match parse_checkin(&line) {
            Some((user, p)) => out.users.entry(user).or_default().push(p),
            None => out.malformed += 1,
        }
    }
    check_malformed(path, out.rows, out.malformed)?;
    Ok(out)
}

fn box_of(p: &[f64; 2]) -> (i64, i64) {
    ((p[0] / BOX_DEG).round() as i64, (p[1] / BOX_DEG).round() as i64)
}

/// Keys with the highest count, in ascending key order.
fn modes<K: Ord + Copy>(counts: impl IntoIterator<Item = (K, usize)>) -> Vec<K> {
    let mut best = 0;
    let mut out = Vec::new();
    for (k, c) in counts {
        if c > best {
            best = c;
            out.clear();
        }
        if c == best {
            out.push(k);
        }
    }
    out.sort_unstable();
    out
}

fn pick<T: Copy>(v: &[T], rng: &mut impl Rng) -> T {
    v[if v.len() > 1 { rng.random_range(0..v.len()) } else { 0 }]
}

/// Most frequent exact login inside the most frequent 0.25 degree box.
/// Ties at either stage are broken uniformly with a generator seeded by `tie_seed`.
pub fn modal_home_location(logins: &[[f64; 2]], tie_seed: u64) -> Result<[f64; 2]> {
    if logins.is_empty() {
        return Err(Error::Parameter("no logins to locate".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(tie_seed);

    let mut boxes: HashMap<(i64, i64), usize> = HashMap::new();
    for p in logins {
        *boxes.entry(box_of(p)).or_default() += 1;
    }
    let home_box = pick(&modes(boxes), &mut rng);

    let mut exact: HashMap<(u64, u64), usize> = HashMap::new();
    for p in logins.iter().filter(|p| box_of(p) == home_box) {
        *exact.entry((p[0].to_bits(), p[1].to_bits())).or_default() += 1;
    }
    // order by value, not by bit pattern, so ties are drawn from a sorted list
    let mut candidates: Vec<(u64, u64)> = modes(exact);
    candidates.sort_by(|a, b| {
        f64::from_bits(a.0)
            .total_cmp(&f64::from_bits(b.0))
            .then(f64::from_bits(a.1).total_cmp(&f64::from_bits(b.1)))
    });
    let (lat, lon) = pick(&candidates, &mut rng);
    Ok([f64::from_bits(lat), f64::from_bits(lon)])
}

#[derive(Clone, Debug)]
pub struct GowallaGraph {
    pub graph: SpatialGraph,
    /// Original user id of each node.
    pub user_ids: Vec<u64>,
    pub edge_rows: usize,
    pub dropped_unlocated: usize,
}

pub fn build_gowalla_graph(edges: &Path, checkins: &Path, tie_seed: u64) -> Result<GowallaGraph> {
    let c = parse_checkins(checkins)?;
    build_from(open(edges)?, edges, &c, tie_seed)
}

/// Located users become nodes in ascending id order, placed at their home
/// location; friendships with an unlocated endpoint are dropped.
pub fn build_from(edges: impl BufRead, edges_path: &Path, checkins: &Checkins, tie_seed: u64) -> Result<GowallaGraph> {
    let user_ids: Vec<u64> = checkins.users.keys().copied().collect();
    let index: HashMap<u64, usize> = user_ids.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let mut positions = Vec::with_capacity(2 * user_ids.len());
    for (&user, logins) in &checkins.users {
        positions.extend(modal_home_location(logins, stream_seed(tie_seed, &[user]))?);
    }

    let (mut rows, mut malformed, mut dropped) = (0, 0, 0);
    let mut pairs = Vec::new();
    for line in edges.lines() {
        let line = line.map_err(|e| Error::io(edges_path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        rows += 1;
        let mut f = line.split_whitespace().map(str::parse::<u64>);
        let (Some(Ok(a)), Some(Ok(b))) = (f.next(), f.next()) else {
            malformed += 1;
            continue;
        };
        match (index.get(&a), index.get(&b)) {
            (Some(&i), Some(&j)) if i != j => pairs.push((i.min(j), i.max(j))),
            (Some(_), Some(_)) => {}
            _ => dropped += 1,
        }
    }
    check_malformed(edges_path, rows, malformed)?;
    pairs.sort_unstable();
    pairs.dedup();
    let graph = SpatialGraph::new(2, Metric::Haversine { radius_km: EARTH_RADIUS_KM }, positions, None, pairs)?;
    Ok(GowallaGraph {
        graph,
        user_ids,
        edge_rows: rows,
        dropped_unlocated: dropped,
    })
}

/// Tab-separated `node  user` lines with a header.
pub fn write_id_map(ids: &[u64], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "node\tuser")?;
    for (node, user) in ids.iter().enumerate() {
        writeln!(out, "{node}\t{user}")?;
    }
    Ok(())
}

/// Node closest to `(lat, lon)` in great-circle distance, lowest id on ties.
pub fn find_seed_node(g: &SpatialGraph, lat: f64, lon: f64) -> Result<usize> {
    if g.n() == 0 {
        return Err(Error::Validation("graph has no nodes".into()));
    }
    if g.dim() != 2 {
        return Err(Error::Dimension { expected: 2, got: g.dim() });
    }
    let mut best = (f64::INFINITY, 0);
    for v in 0..g.n() {
        let p = g.pos(v);
        let d = haversine_km([lat, lon], [p[0], p[1]])?;
        if d < best.0 {
            best = (d, v);
        }
    }
    Ok(best.1)
}
