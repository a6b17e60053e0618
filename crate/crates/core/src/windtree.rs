//! Periodic wind-tree billiard tables and their unfolding to square-tiled
//! surfaces.
//!
//! A table is a fundamental domain of L1 x L2 unit cells with a set of
//! blocked cells (the obstacles), repeated over the integer lattice. The
//! unfolded surface takes four copies of the table, one per reflection sheet
//! (eps_x, eps_y); crossing an obstacle wall flips the corresponding sheet
//! bit in place, and mirrored sheets traverse cells in reversed orientation
//! so that the gluings stay bijective.

use crate::origami::{DifferentialKind, Origami, Perm, ProfileError, SingularityProfile};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("domain dimensions must be positive, got {0} x {1}")]
    BadDimensions(i64, i64),
    #[error("blocked cell ({0}, {1}) outside the fundamental domain")]
    CellOutOfRange(i64, i64),
    #[error("every cell is blocked")]
    NoFreeCells,
    #[error("obstacle touches a periodic copy of itself across the domain boundary")]
    ObstacleTouchesBoundary,
    #[error("obstacle corners touch at a lattice vertex near cell ({0}, {1})")]
    CornerContact(i64, i64),
    #[error("free region is not connected")]
    DisconnectedFreeRegion,
    #[error("unfolded surface is not connected ({components} components)")]
    SurfaceDisconnected { components: usize },
    #[error("table has {0} obstacles; family classification needs exactly one")]
    DisconnectedObstacle(usize),
    #[error("obstacle is not symmetric under both a vertical and a horizontal reflection")]
    AsymmetricObstacle,
    #[error("corner census mismatch: {convex} convex, {reflex} reflex corners")]
    CornerCountMismatch { convex: usize, reflex: usize },
    #[error("obstacle pattern is not invariant under the half-period diagonal shift")]
    PatternNotSublatticeInvariant,
    #[error("diagonal sublattice requires even domain dimensions, got {0} x {1}")]
    OddDimensionsForSublattice(i64, i64),
    #[error("expected wind-tree symmetry not found: {0}")]
    SymmetryNotFound(String),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Integer wind-tree table: L1 x L2 fundamental domain, blocked unit cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerTable {
    l1: i64,
    l2: i64,
    blocked: BTreeSet<(i64, i64)>,
}

impl IntegerTable {
    pub fn new(
        l1: i64,
        l2: i64,
        blocked: impl IntoIterator<Item = (i64, i64)>,
    ) -> Result<IntegerTable, TableError> {
        if l1 < 1 || l2 < 1 {
            return Err(TableError::BadDimensions(l1, l2));
        }
        let blocked: BTreeSet<(i64, i64)> = blocked.into_iter().collect();
        for &(x, y) in &blocked {
            if x < 0 || x >= l1 || y < 0 || y >= l2 {
                return Err(TableError::CellOutOfRange(x, y));
            }
        }
        if blocked.len() as i64 >= l1 * l2 {
            return Err(TableError::NoFreeCells);
        }
        let table = IntegerTable { l1, l2, blocked };
        table.grid(Lattice::Rect)?.validate()?;
        Ok(table)
    }

    pub fn l1(&self) -> i64 {
        self.l1
    }

    pub fn l2(&self) -> i64 {
        self.l2
    }

    pub fn blocked(&self) -> &BTreeSet<(i64, i64)> {
        &self.blocked
    }

    pub fn is_blocked(&self, x: i64, y: i64) -> bool {
        self.blocked
            .contains(&(x.rem_euclid(self.l1), y.rem_euclid(self.l2)))
    }

    pub fn free_cell_count(&self) -> usize {
        (self.l1 * self.l2) as usize - self.blocked.len()
    }

    /// 4-connected components of the blocked set within the window (no wrap):
    /// the individual obstacles.
    pub fn obstacles(&self) -> Vec<BTreeSet<(i64, i64)>> {
        let mut remaining = self.blocked.clone();
        let mut out = Vec::new();
        while let Some(&start) = remaining.iter().next() {
            let mut comp = BTreeSet::new();
            let mut stack = vec![start];
            remaining.remove(&start);
            while let Some((x, y)) = stack.pop() {
                comp.insert((x, y));
                for next in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
                    if remaining.remove(&next) {
                        stack.push(next);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    fn grid(&self, lattice: Lattice) -> Result<Grid, TableError> {
        Grid::build(self, lattice)
    }
}

/// Which quotient lattice the cells live on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Lattice {
    /// Full rectangular lattice (L1, 0), (0, L2).
    Rect,
    /// Index-2 diagonal sublattice (L1/2, L2/2), (L1/2, -L2/2).
    Diagonal,
}

/// Cells of the quotient torus with geometric adjacency, blocked flags and
/// domain-boundary crossing flags.
struct Grid {
    reps: Vec<(i64, i64)>,
    blocked: Vec<bool>,
    right: Vec<usize>,
    left: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    /// adjacency crosses the fundamental-domain boundary (periodic copy)
    wrap_right: Vec<bool>,
    wrap_up: Vec<bool>,
}

impl Grid {
    fn build(table: &IntegerTable, lattice: Lattice) -> Result<Grid, TableError> {
        let (l1, l2) = (table.l1, table.l2);
        let height = match lattice {
            Lattice::Rect => l2,
            Lattice::Diagonal => l2 / 2,
        };
        let mut reps = Vec::new();
        let mut index = HashMap::new();
        for y in 0..height {
            for x in 0..l1 {
                index.insert((x, y), reps.len());
                reps.push((x, y));
            }
        }
        let reduce = |x: i64, y: i64| -> (i64, i64) {
            let mut x = x.rem_euclid(l1);
            let mut y = y.rem_euclid(l2);
            if lattice == Lattice::Diagonal && y >= l2 / 2 {
                x = (x - l1 / 2).rem_euclid(l1);
                y -= l2 / 2;
            }
            (x, y)
        };
        let blocked: Vec<bool> = reps
            .iter()
            .map(|&(x, y)| table.blocked.contains(&(x, y)))
            .collect();
        let n = reps.len();
        let mut right = vec![0; n];
        let mut left = vec![0; n];
        let mut up = vec![0; n];
        let mut down = vec![0; n];
        let mut wrap_right = vec![false; n];
        let mut wrap_up = vec![false; n];
        for (i, &(x, y)) in reps.iter().enumerate() {
            right[i] = index[&reduce(x + 1, y)];
            left[i] = index[&reduce(x - 1, y)];
            up[i] = index[&reduce(x, y + 1)];
            down[i] = index[&reduce(x, y - 1)];
            wrap_right[i] = x + 1 == l1;
            wrap_up[i] = y + 1 == height;
        }
        Ok(Grid {
            reps,
            blocked,
            right,
            left,
            up,
            down,
            wrap_right,
            wrap_up,
        })
    }

    /// Obstacle-contact and free-region checks on the quotient torus.
    fn validate(&self) -> Result<(), TableError> {
        let n = self.reps.len();
        // copies of the obstacle pattern must not touch across the domain
        // boundary (edge adjacency)
        for i in 0..n {
            if !self.blocked[i] {
                continue;
            }
            if self.wrap_right[i] && self.blocked[self.right[i]] {
                return Err(TableError::ObstacleTouchesBoundary);
            }
            if self.wrap_up[i] && self.blocked[self.up[i]] {
                return Err(TableError::ObstacleTouchesBoundary);
            }
        }
        // no two obstacle corners may meet at a lattice vertex: around the
        // top-right vertex of each cell, a blocked diagonal with the other
        // diagonal free is degenerate
        for i in 0..n {
            let a = self.blocked[i];
            let b = self.blocked[self.right[i]];
            let c = self.blocked[self.up[i]];
            let d = self.blocked[self.up[self.right[i]]];
            if (a && d && !b && !c) || (b && c && !a && !d) {
                let (x, y) = self.reps[i];
                return Err(TableError::CornerContact(x, y));
            }
        }
        // free region connected
        let free: Vec<usize> = (0..n).filter(|&i| !self.blocked[i]).collect();
        if free.is_empty() {
            return Err(TableError::NoFreeCells);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![free[0]];
        seen[free[0]] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for j in [self.right[i], self.left[i], self.up[i], self.down[i]] {
                if !self.blocked[j] && !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        if count != free.len() {
            return Err(TableError::DisconnectedFreeRegion);
        }
        Ok(())
    }
}

/// Family index m: the obstacle has 4m corners of angle pi/2 and 4(m-1) of
/// angle 3pi/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyIndex {
    pub m: u64,
}

/// dim_R B(m) = 2m + 2 (the billiard direction not counted).
pub fn family_dimension(m: u64) -> u64 {
    2 * m + 2
}

/// Complex dimension 2g + n - 2 of a stratum of quadratic differentials.
pub fn stratum_dimension(profile: &SingularityProfile) -> Result<u64, ProfileError> {
    let g = profile.genus(DifferentialKind::Quadratic)?;
    Ok(2 * g + profile.len() as u64 - 2)
}

/// Classify an integer table's obstacle by its corner census.
pub fn family_index(table: &IntegerTable) -> Result<FamilyIndex, TableError> {
    let obstacles = table.obstacles();
    if obstacles.len() != 1 {
        return Err(TableError::DisconnectedObstacle(obstacles.len()));
    }
    let cells = &obstacles[0];
    if !is_doubly_symmetric(cells) {
        return Err(TableError::AsymmetricObstacle);
    }
    let (convex, reflex) = corner_census(cells)?;
    if convex % 4 != 0 || convex < 4 {
        return Err(TableError::CornerCountMismatch { convex, reflex });
    }
    let m = (convex / 4) as u64;
    if reflex != 4 * (m as usize - 1) {
        return Err(TableError::CornerCountMismatch { convex, reflex });
    }
    Ok(FamilyIndex { m })
}

/// Double reflection symmetry of a planar cell set: the only axis candidates
/// map the bounding box to itself.
fn is_doubly_symmetric(cells: &BTreeSet<(i64, i64)>) -> bool {
    let min_x = cells.iter().map(|c| c.0).min().unwrap();
    let max_x = cells.iter().map(|c| c.0).max().unwrap();
    let min_y = cells.iter().map(|c| c.1).min().unwrap();
    let max_y = cells.iter().map(|c| c.1).max().unwrap();
    let tx = min_x + max_x;
    let ty = min_y + max_y;
    cells.iter().all(|&(x, y)| cells.contains(&(tx - x, y)))
        && cells.iter().all(|&(x, y)| cells.contains(&(x, ty - y)))
}

/// Convex/reflex corner counts of a planar cell set's boundary. A lattice
/// vertex with one blocked cell around it is a convex obstacle corner, three
/// blocked is reflex; a blocked diagonal pair is degenerate.
fn corner_census(cells: &BTreeSet<(i64, i64)>) -> Result<(usize, usize), TableError> {
    let min_x = cells.iter().map(|c| c.0).min().unwrap();
    let max_x = cells.iter().map(|c| c.0).max().unwrap();
    let min_y = cells.iter().map(|c| c.1).min().unwrap();
    let max_y = cells.iter().map(|c| c.1).max().unwrap();
    let mut convex = 0;
    let mut reflex = 0;
    for vx in min_x..=max_x + 1 {
        for vy in min_y..=max_y + 1 {
            let around = [
                (vx - 1, vy - 1),
                (vx, vy - 1),
                (vx - 1, vy),
                (vx, vy),
            ];
            let b: Vec<bool> = around.iter().map(|c| cells.contains(c)).collect();
            match b.iter().filter(|&&x| x).count() {
                1 => convex += 1,
                3 => reflex += 1,
                2 if b[0] == b[3] => {
                    return Err(TableError::CornerContact(vx, vy));
                }
                _ => {}
            }
        }
    }
    Ok((convex, reflex))
}

/// Which sheet a square belongs to and which cell it covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SquareMeta {
    pub cell: (i64, i64),
    pub eps_x: u8,
    pub eps_y: u8,
}

/// Unfolded wind-tree surface with the bookkeeping needed for symmetries and
/// cross-checks against the billiard flow.
#[derive(Debug, Clone)]
pub struct UnfoldedWindTree {
    pub origami: Origami,
    pub meta: Vec<SquareMeta>,
    table: IntegerTable,
    lattice: Lattice,
    square_index: HashMap<((i64, i64), u8, u8), usize>,
}

impl UnfoldedWindTree {
    pub fn table(&self) -> &IntegerTable {
        &self.table
    }

    pub fn square(&self, cell: (i64, i64), eps_x: u8, eps_y: u8) -> Option<usize> {
        self.square_index.get(&(cell, eps_x, eps_y)).copied()
    }

    /// Reduce an absolute plane cell to its quotient representative.
    pub fn reduce_cell(&self, x: i64, y: i64) -> (i64, i64) {
        let (l1, l2) = (self.table.l1, self.table.l2);
        let mut x = x.rem_euclid(l1);
        let mut y = y.rem_euclid(l2);
        if self.lattice == Lattice::Diagonal && y >= l2 / 2 {
            x = (x - l1 / 2).rem_euclid(l1);
            y -= l2 / 2;
        }
        (x, y)
    }
}

/// Unfold over the full rectangular lattice: four sheets per free cell.
pub fn unfold_to_origami(table: &IntegerTable) -> Result<UnfoldedWindTree, TableError> {
    unfold(table, Lattice::Rect)
}

/// Unfold over the index-2 diagonal sublattice spanned by (L1/2, L2/2) and
/// (L1/2, -L2/2); requires the blocked pattern to be invariant under the
/// half-period shift.
pub fn unfold_diagonal_sublattice(table: &IntegerTable) -> Result<UnfoldedWindTree, TableError> {
    if table.l1 % 2 != 0 || table.l2 % 2 != 0 {
        return Err(TableError::OddDimensionsForSublattice(table.l1, table.l2));
    }
    let shift_ok = table.blocked.iter().all(|&(x, y)| {
        table
            .blocked
            .contains(&((x + table.l1 / 2).rem_euclid(table.l1), (y + table.l2 / 2).rem_euclid(table.l2)))
    });
    if !shift_ok {
        return Err(TableError::PatternNotSublatticeInvariant);
    }
    unfold(table, Lattice::Diagonal)
}

fn unfold(table: &IntegerTable, lattice: Lattice) -> Result<UnfoldedWindTree, TableError> {
    let grid = table.grid(lattice)?;
    grid.validate()?;
    let free: Vec<usize> = (0..grid.reps.len()).filter(|&i| !grid.blocked[i]).collect();
    let mut cell_slot = vec![usize::MAX; grid.reps.len()];
    for (slot, &cell) in free.iter().enumerate() {
        cell_slot[cell] = slot;
    }
    let nsq = 4 * free.len();
    let square = |cell_slot: usize, ex: u8, ey: u8| -> usize {
        4 * cell_slot + ex as usize + 2 * ey as usize
    };
    let mut r = vec![usize::MAX; nsq];
    let mut u = vec![usize::MAX; nsq];
    for (slot, &cell) in free.iter().enumerate() {
        for ey in 0..2u8 {
            for ex in 0..2u8 {
                let sq = square(slot, ex, ey);
                // horizontal gluing: sheet eps_x = 0 moves in +x, the
                // mirrored sheet moves in -x; obstacle walls flip the sheet
                let htarget = if ex == 0 { grid.right[cell] } else { grid.left[cell] };
                r[sq] = if grid.blocked[htarget] {
                    square(slot, 1 - ex, ey)
                } else {
                    square(cell_slot[htarget], ex, ey)
                };
                let vtarget = if ey == 0 { grid.up[cell] } else { grid.down[cell] };
                u[sq] = if grid.blocked[vtarget] {
                    square(slot, ex, 1 - ey)
                } else {
                    square(cell_slot[vtarget], ex, ey)
                };
            }
        }
    }
    let origami = Origami::new(
        Perm::from_images(r).expect("unfolding r is a bijection"),
        Perm::from_images(u).expect("unfolding u is a bijection"),
    )
    .expect("same square count");
    if !origami.is_connected() {
        let components = count_components(&origami);
        return Err(TableError::SurfaceDisconnected { components });
    }
    let mut meta = vec![
        SquareMeta {
            cell: (0, 0),
            eps_x: 0,
            eps_y: 0
        };
        nsq
    ];
    let mut square_index = HashMap::new();
    for (slot, &cell) in free.iter().enumerate() {
        for ey in 0..2u8 {
            for ex in 0..2u8 {
                let sq = square(slot, ex, ey);
                meta[sq] = SquareMeta {
                    cell: grid.reps[cell],
                    eps_x: ex,
                    eps_y: ey,
                };
                square_index.insert((grid.reps[cell], ex, ey), sq);
            }
        }
    }
    Ok(UnfoldedWindTree {
        origami,
        meta,
        table: table.clone(),
        lattice,
        square_index,
    })
}

fn count_components(o: &Origami) -> usize {
    let n = o.n();
    let mut seen = vec![false; n];
    let mut components = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        components += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            for j in [o.r().apply(i), o.u().apply(i)] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    components
}

/// The (Z/2Z)^3 isometry group of an unfolded wind-tree surface: two sheet
/// translations and a central-symmetry antiautomorphism.
pub struct WindTreeSymmetries {
    pub tau_h: Perm,
    pub tau_v: Perm,
    pub iota: Perm,
}

pub fn windtree_symmetries(
    unfolded: &UnfoldedWindTree,
) -> Result<WindTreeSymmetries, TableError> {
    let table = &unfolded.table;
    let o = &unfolded.origami;
    let n = o.n();
    let build = |cell_map: &dyn Fn((i64, i64)) -> (i64, i64),
                 flip_x: bool,
                 flip_y: bool|
     -> Option<Perm> {
        let mut images = vec![usize::MAX; n];
        for (sq, m) in unfolded.meta.iter().enumerate() {
            let cell = cell_map(m.cell);
            let ex = if flip_x { 1 - m.eps_x } else { m.eps_x };
            let ey = if flip_y { 1 - m.eps_y } else { m.eps_y };
            images[sq] = unfolded.square(cell, ex, ey)?;
        }
        Perm::from_images(images).ok()
    };
    let is_auto = |p: &Perm| -> bool {
        p.compose(o.r()) == o.r().compose(p) && p.compose(o.u()) == o.u().compose(p)
    };
    let is_anti = |p: &Perm| -> bool {
        p.compose(o.r()) == o.r().inverse().compose(p)
            && p.compose(o.u()) == o.u().inverse().compose(p)
    };
    let mut tau_h = None;
    let mut rho_x = None;
    for tx in 0..table.l1 {
        let map = |c: (i64, i64)| unfolded.reduce_cell(tx - c.0, c.1);
        if let Some(p) = build(&map, true, false) {
            if is_auto(&p) {
                tau_h = Some(p);
                rho_x = Some(tx);
                break;
            }
        }
    }
    let tau_h = tau_h
        .ok_or_else(|| TableError::SymmetryNotFound("horizontal translation tau_h".into()))?;
    let rho_x = rho_x.unwrap();
    let mut tau_v = None;
    let mut rho_y = None;
    for ty in 0..table.l2 {
        let map = |c: (i64, i64)| unfolded.reduce_cell(c.0, ty - c.1);
        if let Some(p) = build(&map, false, true) {
            if is_auto(&p) {
                tau_v = Some(p);
                rho_y = Some(ty);
                break;
            }
        }
    }
    let tau_v =
        tau_v.ok_or_else(|| TableError::SymmetryNotFound("vertical translation tau_v".into()))?;
    let rho_y = rho_y.unwrap();
    let map = |c: (i64, i64)| unfolded.reduce_cell(rho_x - c.0, rho_y - c.1);
    let iota = build(&map, false, false)
        .filter(|p| is_anti(p))
        .ok_or_else(|| TableError::SymmetryNotFound("central symmetry iota".into()))?;
    // The isometry group element is a pair (permutation, derivative sign):
    // iota carries sign -1, so it never coincides with a translation even
    // when its square permutation happens to be trivial (tables whose rows
    // and columns all have length two). (Z/2Z)^3 needs three commuting
    // involutions and eight distinct (perm, sign) products.
    let gens = [tau_h.clone(), tau_v.clone(), iota.clone()];
    for g in &gens {
        if !g.is_involution() {
            return Err(TableError::SymmetryNotFound("generator of order > 2".into()));
        }
    }
    for a in &gens {
        for b in &gens {
            if a.compose(b) != b.compose(a) {
                return Err(TableError::SymmetryNotFound(
                    "generators do not commute".into(),
                ));
            }
        }
    }
    let mut group: BTreeSet<(Perm, bool)> = BTreeSet::new();
    for a in [None, Some(&tau_h)] {
        for b in [None, Some(&tau_v)] {
            for c in [None, Some((&iota, ()))] {
                let mut p = Perm::identity(n);
                let mut sign = false;
                for g in [a, b].into_iter().flatten() {
                    p = p.compose(g);
                }
                if let Some((i, ())) = c {
                    p = p.compose(i);
                    sign = true;
                }
                group.insert((p, sign));
            }
        }
    }
    if group.len() != 8 {
        return Err(TableError::SymmetryNotFound(format!(
            "generated isometry group has order {}, expected 8",
            group.len()
        )));
    }
    Ok(WindTreeSymmetries { tau_h, tau_v, iota })
}

/// Parse the table text format: `L1 L2` on the first line, one `x y` blocked
/// cell per following line. Lines starting with `#` are comments.
pub fn parse_integer_table(text: &str) -> Result<IntegerTable, TableError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let dims = lines.next().ok_or(TableError::BadDimensions(0, 0))?;
    let mut it = dims.split_whitespace();
    let l1: i64 = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(TableError::BadDimensions(0, 0))?;
    let l2: i64 = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(TableError::BadDimensions(l1, 0))?;
    let mut blocked = Vec::new();
    for line in lines {
        let mut it = line.split_whitespace();
        let x: i64 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or(TableError::CellOutOfRange(-1, -1))?;
        let y: i64 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or(TableError::CellOutOfRange(x, -1))?;
        blocked.push((x, y));
    }
    IntegerTable::new(l1, l2, blocked)
}

pub fn format_integer_table(t: &IntegerTable) -> String {
    let mut s = format!("{} {}\n", t.l1, t.l2);
    for &(x, y) in &t.blocked {
        s.push_str(&format!("{x} {y}\n"));
    }
    s
}

/// The classical one-obstacle table: 2x2 domain, single blocked cell.
pub fn classical_table() -> IntegerTable {
    IntegerTable::new(2, 2, [(1, 1)]).expect("classical table is valid")
}

/// The table with one obstacle out of four removed: 4x4 domain, obstacles in
/// three of the four 2x2 blocks.
pub fn chessboard_table() -> IntegerTable {
    IntegerTable::new(4, 4, [(1, 1), (3, 1), (1, 3)]).expect("chessboard table is valid")
}

/// Two obstacles on a diagonal: the pattern invariant under the half-period
/// diagonal shift but not under the half lattice itself.
pub fn diagonal_table() -> IntegerTable {
    IntegerTable::new(4, 4, [(1, 1), (3, 3)]).expect("diagonal table is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::origami::DifferentialKind;

    #[test]
    fn classical_unfolds_to_h2222_genus_5() {
        let unf = unfold_to_origami(&classical_table()).unwrap();
        assert_eq!(unf.origami.n(), 12);
        assert!(unf.origami.is_connected());
        let p = unf.origami.singularity_profile();
        assert_eq!(p.orders(), &[2, 2, 2, 2]);
        assert_eq!(p.genus(DifferentialKind::Abelian), Ok(5));
    }

    #[test]
    fn chessboard_unfolds_to_h2_12() {
        let unf = unfold_to_origami(&chessboard_table()).unwrap();
        assert_eq!(unf.origami.n(), 52);
        let p = unf.origami.singularity_profile();
        assert_eq!(p.orders(), vec![2; 12].as_slice());
        assert_eq!(p.genus(DifferentialKind::Abelian), Ok(13));
    }

    #[test]
    fn empty_table_rejected_as_disconnected_sheets() {
        let t = IntegerTable::new(2, 2, []).unwrap();
        match unfold_to_origami(&t) {
            Err(TableError::SurfaceDisconnected { components: 4 }) => {}
            other => panic!("expected 4 disconnected sheets, got {other:?}"),
        }
    }

    #[test]
    fn family_index_census() {
        assert_eq!(family_index(&classical_table()).unwrap(), FamilyIndex { m: 1 });
        // plus-shaped obstacle: 8 convex corners, so m = 2
        let plus = IntegerTable::new(
            7,
            7,
            [(2, 1), (1, 2), (2, 2), (3, 2), (2, 3)],
        )
        .unwrap();
        assert_eq!(family_index(&plus).unwrap(), FamilyIndex { m: 2 });
        // L-shaped obstacle is not doubly symmetric
        let ell = IntegerTable::new(6, 6, [(1, 1), (2, 1), (1, 2)]).unwrap();
        assert_eq!(family_index(&ell), Err(TableError::AsymmetricObstacle));
        // chessboard has three obstacles
        assert_eq!(
            family_index(&chessboard_table()),
            Err(TableError::DisconnectedObstacle(3))
        );
    }

    #[test]
    fn stepped_cross_family_index() {
        // nested-rectangle cross with three steps per quadrant: m = 3
        let mut blocked = Vec::new();
        // widths 7,5,3 and heights 3,5,7 centered in a 9x9 block of an 11x11 domain
        let cx = 5i64;
        let cy = 5i64;
        let dims = [(3i64, 0i64), (2, 1), (1, 2)];
        for &(hw, hh) in &dims {
            for x in -hw..=hw {
                for y in -hh..=hh {
                    blocked.push((cx + x, cy + y));
                }
            }
        }
        let t = IntegerTable::new(11, 11, blocked).unwrap();
        assert_eq!(family_index(&t).unwrap(), FamilyIndex { m: 3 });
    }

    #[test]
    fn family_dimension_values() {
        assert_eq!(family_dimension(1), 4);
        assert_eq!(family_dimension(3), 8);
        // Q(1^m, -1^(m+4)): dim_C = 2m+2 = dim_R B(m)
        for m in 1..6i64 {
            let mut orders = vec![1; m as usize];
            orders.extend(vec![-1; m as usize + 4]);
            let q = SingularityProfile::new(orders).unwrap();
            assert_eq!(stratum_dimension(&q).unwrap(), 2 * m as u64 + 2);
        }
        // Q(-1^4): g = 0, n = 4
        let pillow = SingularityProfile::new(vec![-1, -1, -1, -1]).unwrap();
        assert_eq!(stratum_dimension(&pillow).unwrap(), 2);
    }

    #[test]
    fn validation_rejects_touching_and_disconnected() {
        // obstacle touching its copy across the wrap
        assert_eq!(
            IntegerTable::new(2, 2, [(0, 0), (1, 0)]),
            Err(TableError::ObstacleTouchesBoundary)
        );
        // full row of obstacles disconnects the free region... but it first
        // touches its own copy horizontally
        assert!(IntegerTable::new(1, 2, [(0, 0)]).is_err());
        // corner contact between obstacles
        let err = IntegerTable::new(4, 4, [(1, 1), (2, 2)]);
        assert!(matches!(err, Err(TableError::CornerContact(_, _))), "{err:?}");
    }

    #[test]
    fn diagonal_quotient_of_diagonal_table() {
        let unf = unfold_diagonal_sublattice(&diagonal_table()).unwrap();
        // one obstacle class among 8 cell classes: 7 free cells, 28 squares
        assert_eq!(unf.origami.n(), 28);
        let p = unf.origami.singularity_profile();
        assert_eq!(p.orders(), &[2, 2, 2, 2]);
    }

    #[test]
    fn diagonal_quotient_rejects_noninvariant_pattern() {
        assert!(matches!(
            unfold_diagonal_sublattice(&chessboard_table()),
            Err(TableError::PatternNotSublatticeInvariant)
        ));
    }

    #[test]
    fn diagonal_quotient_of_full_pattern_matches_doubled_domain() {
        // every 2x2 block has an obstacle: diagonal-invariant
        let full = IntegerTable::new(4, 4, [(1, 1), (3, 1), (1, 3), (3, 3)]).unwrap();
        let diag = unfold_diagonal_sublattice(&full).unwrap();
        let doubled = IntegerTable::new(4, 2, [(1, 1), (3, 1)]).unwrap();
        let rect = unfold_to_origami(&doubled).unwrap();
        assert_eq!(diag.origami.n(), rect.origami.n());
        assert_eq!(
            diag.origami.singularity_profile(),
            rect.origami.singularity_profile()
        );
    }

    #[test]
    fn classical_symmetries_present() {
        let unf = unfold_to_origami(&classical_table()).unwrap();
        let syms = windtree_symmetries(&unf).unwrap();
        assert!(syms.tau_h.is_involution());
        assert!(syms.tau_v.is_involution());
        assert!(syms.tau_h.has_fixed_point().is_none());
        assert!(syms.tau_v.has_fixed_point().is_none());
    }

    #[test]
    fn chessboard_symmetries_and_quotient() {
        let unf = unfold_to_origami(&chessboard_table()).unwrap();
        let syms = windtree_symmetries(&unf).unwrap();
        let quotient = unf
            .origami
            .quotient_by_translation_involution(&syms.tau_v)
            .unwrap();
        assert_eq!(quotient.n(), 26);
        let p = quotient.singularity_profile();
        assert_eq!(p.orders(), vec![2; 6].as_slice());
        assert_eq!(p.genus(DifferentialKind::Abelian), Ok(7));
    }

    #[test]
    fn quotient_retains_pushed_tau_h() {
        let unf = unfold_to_origami(&chessboard_table()).unwrap();
        let syms = windtree_symmetries(&unf).unwrap();
        let o = &unf.origami;
        let q = o.quotient_by_translation_involution(&syms.tau_v).unwrap();
        // push tau_h through the quotient: it maps tau_v-orbits to tau_v-orbits
        let n = o.n();
        let mut class = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for i in 0..n {
            if class[i] == usize::MAX {
                class[i] = reps.len();
                class[syms.tau_v.apply(i)] = reps.len();
                reps.push(i);
            }
        }
        let images: Vec<usize> = reps.iter().map(|&r| class[syms.tau_h.apply(r)]).collect();
        let pushed = Perm::from_images(images).unwrap();
        assert!(pushed.is_involution());
        assert!(pushed.has_fixed_point().is_none());
        assert_eq!(pushed.compose(q.r()), q.r().compose(&pushed));
        assert_eq!(pushed.compose(q.u()), q.u().compose(&pushed));
    }

    #[test]
    fn table_text_round_trip() {
        let t = chessboard_table();
        let s = format_integer_table(&t);
        let t2 = parse_integer_table(&s).unwrap();
        assert_eq!(t, t2);
    }
}
