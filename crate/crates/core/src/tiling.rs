//! Rhombus tilings of the triangle `T(n)` with `n` upward triangles removed.
//!
//! Upward triangle `(r, p)` (row `r` from the top, position `p` from the
//! left) is the point `(n-1-r, r-p, p)` of `T(n,3)`. Downward triangle
//! `(r, q)` sits between upward triangles `(r, q)` and `(r, q+1)`, below
//! `(r-1, q)`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::lgv::Routing;
use crate::matroid::{GroundSet, LatticePoint, PointSet};
use crate::{Error, Result};

/// Which downward neighbour an upward triangle shares its rhombus with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DownDir {
    Left,
    Right,
    Bottom,
}

impl DownDir {
    fn letter(self) -> char {
        match self {
            DownDir::Left => 'l',
            DownDir::Right => 'r',
            DownDir::Bottom => 'b',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tile {
    pub up: LatticePoint,
    pub down_dir: DownDir,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoleyTriangle {
    pub n: usize,
    pub holes: Vec<LatticePoint>,
}

impl HoleyTriangle {
    pub fn new(n: usize, holes: Vec<LatticePoint>) -> Self {
        HoleyTriangle { n, holes }
    }

    pub fn from_point_set(set: &PointSet) -> Result<Self> {
        if set.d != 3 {
            return Err(Error::InvalidParameters(format!("holes must lie in T(n,3), got d = {}", set.d)));
        }
        Ok(HoleyTriangle::new(set.n, set.points.clone()))
    }

    pub fn point_set(&self) -> PointSet {
        PointSet::new(self.n, 3, self.holes.clone())
    }

    fn grid(&self) -> Result<Grid> {
        let ground = GroundSet::new(self.n, 3)?;
        ground.indices_of(&self.holes)?;
        let mut g = Grid::new(self.n);
        for h in &self.holes {
            let (r, p) = up_pos(self.n, h);
            g.hole[r][p] = true;
        }
        Ok(g)
    }

    fn checked_grid(&self) -> Result<Grid> {
        if self.holes.len() != self.n {
            return Err(Error::WrongHoleCount { expected: self.n, got: self.holes.len() });
        }
        self.grid()
    }
}

/// Row and position of the upward triangle for a point of `T(n,3)`.
pub fn up_pos(n: usize, p: &LatticePoint) -> (usize, usize) {
    let c = p.coords();
    (n - 1 - c[0], c[2])
}

pub fn up_point(n: usize, r: usize, p: usize) -> LatticePoint {
    LatticePoint::new(vec![n - 1 - r, r - p, p])
}

/// Canonical index of downward triangle `(r, q)`: top to bottom, left to right.
pub fn down_index(r: usize, q: usize) -> usize {
    r * (r - 1) / 2 + q
}

#[derive(Clone, Debug)]
struct Grid {
    n: usize,
    hole: Vec<Vec<bool>>,
    dir: Vec<Vec<Option<DownDir>>>,
}

impl Grid {
    fn new(n: usize) -> Self {
        Grid {
            n,
            hole: (0..n).map(|r| vec![false; r + 1]).collect(),
            dir: (0..n).map(|r| vec![None; r + 1]).collect(),
        }
    }

    // (row, position) of the downward triangle paired with up (r, p).
    fn partner(&self, r: usize, p: usize, d: DownDir) -> Option<(usize, usize)> {
        match d {
            DownDir::Right => (p < r).then_some((r, p)),
            DownDir::Left => (p >= 1).then(|| (r, p - 1)),
            DownDir::Bottom => (r + 1 < self.n).then_some((r + 1, p)),
        }
    }

    fn tiling(&self) -> RhombusTiling {
        let mut holes = Vec::new();
        let mut tiles = Vec::new();
        for r in 0..self.n {
            for p in 0..=r {
                let pt = up_point(self.n, r, p);
                if self.hole[r][p] {
                    holes.push(pt);
                } else if let Some(d) = self.dir[r][p] {
                    tiles.push(Tile { up: pt, down_dir: d });
                }
            }
        }
        holes.sort();
        tiles.sort();
        RhombusTiling { n: self.n, holes, tiles }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhombusTiling {
    pub n: usize,
    pub holes: Vec<LatticePoint>,
    pub tiles: Vec<Tile>,
}

impl RhombusTiling {
    fn grid(&self) -> Result<Grid> {
        let mut g = HoleyTriangle::new(self.n, self.holes.clone()).grid()?;
        let ground = GroundSet::new(self.n, 3)?;
        for t in &self.tiles {
            if ground.index_of(&t.up).is_none() {
                return Err(Error::MalformedTiling(format!("{} is not an upward triangle", t.up)));
            }
            let (r, p) = up_pos(self.n, &t.up);
            if g.hole[r][p] || g.dir[r][p].is_some() {
                return Err(Error::MalformedTiling(format!("{} is covered twice", t.up)));
            }
            g.dir[r][p] = Some(t.down_dir);
        }
        Ok(g)
    }

    /// Checks that every downward triangle and every non-hole upward
    /// triangle is covered exactly once.
    pub fn validate(&self) -> Result<()> {
        let g = self.grid()?;
        let n = self.n;
        let mut down_used = vec![false; n * n.saturating_sub(1) / 2];
        for r in 0..n {
            for p in 0..=r {
                if g.hole[r][p] {
                    continue;
                }
                let d = g.dir[r][p]
                    .ok_or_else(|| Error::MalformedTiling(format!("{} is uncovered", up_point(n, r, p))))?;
                let (dr, dq) = g.partner(r, p, d).ok_or_else(|| {
                    Error::MalformedTiling(format!("{} has no {d:?} neighbour", up_point(n, r, p)))
                })?;
                let k = down_index(dr, dq);
                if down_used[k] {
                    return Err(Error::MalformedTiling(format!("downward triangle ({dr},{dq}) covered twice")));
                }
                down_used[k] = true;
            }
        }
        if let Some(k) = down_used.iter().position(|u| !u) {
            return Err(Error::MalformedTiling(format!("downward triangle {k} uncovered")));
        }
        Ok(())
    }

    pub fn holey_triangle(&self) -> HoleyTriangle {
        HoleyTriangle::new(self.n, self.holes.clone())
    }
}

// Kuhn's augmenting paths with downs in canonical order.
fn matching(g: &mut Grid) -> bool {
    let n = g.n;
    let downs: Vec<(usize, usize)> = (1..n).flat_map(|r| (0..r).map(move |q| (r, q))).collect();
    let free_ups: usize = g.hole.iter().flatten().filter(|h| !**h).count();
    if free_ups != downs.len() {
        return false;
    }
    // neighbours of down (r, q): above, left, right
    let adj = |r: usize, q: usize| -> [(usize, usize, DownDir); 3] {
        [(r - 1, q, DownDir::Bottom), (r, q, DownDir::Right), (r, q + 1, DownDir::Left)]
    };
    let mut owner: Vec<Vec<Option<usize>>> = (0..n).map(|r| vec![None; r + 1]).collect();
    fn augment(
        k: usize,
        downs: &[(usize, usize)],
        adj: &dyn Fn(usize, usize) -> [(usize, usize, DownDir); 3],
        hole: &[Vec<bool>],
        owner: &mut Vec<Vec<Option<usize>>>,
        seen: &mut Vec<Vec<bool>>,
    ) -> bool {
        let (r, q) = downs[k];
        for (ur, up, _) in adj(r, q) {
            if hole[ur][up] || seen[ur][up] {
                continue;
            }
            seen[ur][up] = true;
            let free = match owner[ur][up] {
                None => true,
                Some(other) => augment(other, downs, adj, hole, owner, seen),
            };
            if free {
                owner[ur][up] = Some(k);
                return true;
            }
        }
        false
    }
    for k in 0..downs.len() {
        let mut seen: Vec<Vec<bool>> = (0..n).map(|r| vec![false; r + 1]).collect();
        if !augment(k, &downs, &adj, &g.hole, &mut owner, &mut seen) {
            return false;
        }
    }
    for r in 0..n {
        for p in 0..=r {
            if let Some(k) = owner[r][p] {
                let (dr, dq) = downs[k];
                g.dir[r][p] = Some(adj(dr, dq).iter().find(|a| a.0 == r && a.1 == p).expect("adjacent").2);
            }
        }
    }
    true
}

pub fn is_tileable(h: &HoleyTriangle) -> Result<bool> {
    Ok(find_tiling(h)?.is_some())
}

/// A tiling by maximum bipartite matching, if one exists.
pub fn find_tiling(h: &HoleyTriangle) -> Result<Option<RhombusTiling>> {
    let mut g = h.checked_grid()?;
    Ok(matching(&mut g).then(|| g.tiling()))
}

/// A tiling built by induction on `n` and on the number of holes in the
/// bottom row, exchanging the leftmost bottom hole for one in the row above.
pub fn find_tiling_by_sliding(h: &HoleyTriangle) -> Result<RhombusTiling> {
    let g = h.checked_grid()?;
    let ground = GroundSet::new(h.n, 3)?;
    let idx = ground.indices_of(&h.holes)?;
    if let Some(witness) = ground.find_violation(&idx) {
        return Err(Error::NotBasis { witness });
    }
    let holes: BTreeSet<(usize, usize)> =
        (0..h.n).flat_map(|r| (0..=r).map(move |p| (r, p))).filter(|&(r, p)| g.hole[r][p]).collect();
    let mut out = Grid::new(h.n);
    for &(r, p) in &holes {
        out.hole[r][p] = true;
    }
    slide(h.n, &holes, &mut out.dir);
    Ok(out.tiling())
}

fn is_basis_rp(n: usize, holes: &BTreeSet<(usize, usize)>) -> bool {
    let ground = GroundSet::new(n, 3).expect("n >= 1");
    let pts: Vec<LatticePoint> = holes.iter().map(|&(r, p)| up_point(n, r, p)).collect();
    ground.indices_of(&pts).map(|i| ground.is_basis(&i)).unwrap_or(false)
}

fn slide(n: usize, holes: &BTreeSet<(usize, usize)>, dir: &mut [Vec<Option<DownDir>>]) {
    if n == 1 {
        return;
    }
    let bottom: Vec<usize> = holes.iter().filter(|h| h.0 == n - 1).map(|h| h.1).collect();
    if bottom.len() == 1 {
        let h = bottom[0];
        for p in 0..n {
            if p != h {
                dir[n - 1][p] = Some(if p < h { DownDir::Right } else { DownDir::Left });
            }
        }
        let top: BTreeSet<(usize, usize)> = holes.iter().copied().filter(|h| h.0 < n - 1).collect();
        slide(n - 1, &top, &mut dir[..n - 1]);
        return;
    }
    let (px, py) = (bottom[0], bottom[1]);
    let q = (px..py)
        .find(|&q| {
            let a = (n - 2, q);
            if holes.contains(&a) {
                return false;
            }
            let mut s = holes.clone();
            s.remove(&(n - 1, px));
            s.insert(a);
            is_basis_rp(n, &s)
        })
        .expect("some exchange keeps a basis");
    let mut s = holes.clone();
    s.remove(&(n - 1, px));
    s.insert((n - 2, q));
    slide(n, &s, dir);
    dir[n - 2][q] = Some(DownDir::Bottom);
    for p in px + 1..=q {
        dir[n - 1][p] = Some(DownDir::Left);
    }
    dir[n - 1][px] = None;
}

/// Every tiling of `h`, by backtracking over downward triangles in canonical order.
pub fn all_tilings(h: &HoleyTriangle) -> Result<Vec<RhombusTiling>> {
    let mut g = h.checked_grid()?;
    let n = h.n;
    let downs: Vec<(usize, usize)> = (1..n).flat_map(|r| (0..r).map(move |q| (r, q))).collect();
    fn go(k: usize, downs: &[(usize, usize)], g: &mut Grid, out: &mut Vec<RhombusTiling>) {
        if k == downs.len() {
            out.push(g.tiling());
            return;
        }
        let (r, q) = downs[k];
        for (ur, up, d) in [(r - 1, q, DownDir::Bottom), (r, q, DownDir::Right), (r, q + 1, DownDir::Left)] {
            if !g.hole[ur][up] && g.dir[ur][up].is_none() {
                g.dir[ur][up] = Some(d);
                go(k + 1, downs, g, out);
                g.dir[ur][up] = None;
            }
        }
    }
    let free_ups: usize = g.hole.iter().flatten().filter(|h| !**h).count();
    let mut out = Vec::new();
    if free_ups == downs.len() {
        go(0, &downs, &mut g, &mut out);
    }
    Ok(out)
}

/// Paths start at the holes and follow sideways rhombi down to the bottom row.
pub fn tiling_to_routing(t: &RhombusTiling) -> Result<Routing> {
    t.validate()?;
    let g = t.grid()?;
    let n = t.n;
    let mut paths = Vec::new();
    for h in &t.holes {
        let (mut r, mut p) = up_pos(n, h);
        let mut path = vec![h.clone()];
        while r + 1 < n {
            if g.dir[r + 1][p] == Some(DownDir::Right) {
                r += 1;
            } else if g.dir[r + 1][p + 1] == Some(DownDir::Left) {
                r += 1;
                p += 1;
            } else {
                return Err(Error::MalformedTiling(format!(
                    "path from {h} is blocked below {}",
                    up_point(n, r, p)
                )));
            }
            path.push(up_point(n, r, p));
        }
        paths.push(path);
    }
    Ok(Routing { n, paths })
}

pub fn routing_to_tiling(routing: &Routing) -> Result<RhombusTiling> {
    routing.validate()?;
    let n = routing.n;
    if routing.paths.len() != n {
        return Err(Error::MalformedRouting(format!("{} paths, expected {n}", routing.paths.len())));
    }
    let mut g = Grid::new(n);
    let mut on_path: Vec<Vec<bool>> = (0..n).map(|r| vec![false; r + 1]).collect();
    for path in &routing.paths {
        let (r0, p0) = up_pos(n, &path[0]);
        g.hole[r0][p0] = true;
        on_path[r0][p0] = true;
        for w in path.windows(2) {
            let (_, pa) = up_pos(n, &w[0]);
            let (rb, pb) = up_pos(n, &w[1]);
            on_path[rb][pb] = true;
            g.dir[rb][pb] = Some(if pb == pa { DownDir::Right } else { DownDir::Left });
        }
    }
    for r in 0..n {
        for p in 0..=r {
            if !on_path[r][p] {
                if r + 1 == n {
                    return Err(Error::MalformedRouting(format!(
                        "bottom triangle {} is off every path",
                        up_point(n, r, p)
                    )));
                }
                g.dir[r][p] = Some(DownDir::Bottom);
            }
        }
    }
    let t = g.tiling();
    t.validate().map_err(|e| Error::MalformedRouting(e.to_string()))?;
    Ok(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderFormat {
    Ascii,
    Svg,
}

pub enum Drawable<'a> {
    Tiling(&'a RhombusTiling),
    Holes(&'a HoleyTriangle),
}

pub fn render(obj: Drawable<'_>, format: RenderFormat) -> Result<String> {
    let (n, g, tiled) = match obj {
        Drawable::Tiling(t) => {
            t.validate()?;
            (t.n, t.grid()?, true)
        }
        Drawable::Holes(h) => (h.n, h.grid()?, false),
    };
    Ok(match format {
        RenderFormat::Ascii => ascii(n, &g, tiled),
        RenderFormat::Svg => svg(n, &g),
    })
}

fn ascii(n: usize, g: &Grid, tiled: bool) -> String {
    let mut out = String::new();
    for r in 0..n {
        out.push_str(&" ".repeat(n - 1 - r));
        let cells: Vec<String> = (0..=r)
            .map(|p| {
                if g.hole[r][p] {
                    '#'
                } else if tiled {
                    g.dir[r][p].map_or('?', DownDir::letter)
                } else {
                    '.'
                }
                .to_string()
            })
            .collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

fn vertex(n: usize, i: usize, j: usize) -> (f64, f64) {
    ((n as f64 - i as f64) / 2.0 + j as f64, i as f64 * 3f64.sqrt() / 2.0)
}

fn polygon(out: &mut String, class: &str, n: usize, pts: &[(usize, usize)]) {
    let coords: Vec<String> = pts
        .iter()
        .map(|&(i, j)| {
            let (x, y) = vertex(n, i, j);
            format!("{x:.4},{y:.4}")
        })
        .collect();
    let fill = if class == "hole" { "url(#hatch)" } else { "#f2e6c9" };
    writeln!(out, r#"  <polygon class="{class}" points="{}" fill="{fill}"/>"#, coords.join(" ")).unwrap();
}

fn svg(n: usize, g: &Grid) -> String {
    let height = n as f64 * 3f64.sqrt() / 2.0;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="-0.1000 -0.1000 {:.4} {:.4}">"#,
        n as f64 + 0.2,
        height + 0.2
    )
    .unwrap();
    out.push_str(concat!(
        "  <defs><pattern id=\"hatch\" width=\"0.1\" height=\"0.1\" patternUnits=\"userSpaceOnUse\" ",
        "patternTransform=\"rotate(45)\"><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"0.1\" stroke=\"#444\" ",
        "stroke-width=\"0.03\"/></pattern></defs>\n",
        "  <g stroke=\"#222\" stroke-width=\"0.02\" stroke-linejoin=\"round\">\n"
    ));
    for r in 0..n {
        for p in 0..=r {
            if g.hole[r][p] {
                polygon(&mut out, "hole", n, &[(r, p), (r + 1, p), (r + 1, p + 1)]);
                continue;
            }
            let quad = match g.dir[r][p] {
                Some(DownDir::Right) => [(r, p), (r, p + 1), (r + 1, p + 1), (r + 1, p)],
                Some(DownDir::Left) => [(r, p - 1), (r, p), (r + 1, p + 1), (r + 1, p)],
                Some(DownDir::Bottom) => [(r, p), (r + 1, p + 1), (r + 2, p + 1), (r + 1, p)],
                None => {
                    polygon(&mut out, "up", n, &[(r, p), (r + 1, p), (r + 1, p + 1)]);
                    continue;
                }
            };
            polygon(&mut out, "rhombus", n, &quad);
        }
    }
    out.push_str("  </g>\n</svg>\n");
    out
}
