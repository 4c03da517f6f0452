//! `latpoly nef`: nef partitions and reflexive Gorenstein cones.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use latpoly::cws::{polytope_from_cws, Cws};
use latpoly::gorenstein::{DualCone, GorensteinCone};
use latpoly::hodge::hodge_numbers;
use latpoly::nef::{
    dual_gorenstein, dual_has_singleton, enumerate_nef_partitions, lift_matrix, partition_degrees, support_cone,
    support_from_points, support_from_weights, NefOptions, NefPartition,
};
use latpoly::polytope::{analyze, complete_points, dual};
use latpoly::simplices::ip_simplices;
use latpoly::{FacetSystem, LatticePolytope, Point};

use crate::input::{Record, RecordKind};
use crate::poly::fibration_lines;
use crate::render::{self, columns, dashes, row};
use crate::{drive, fail, split_args, CliError, Common, Io, Job, Legacy, Streams};

pub const HELP: &str = "\
Option strings (separate arguments):
  -h  this information           -f or -  use as filter (no prompts)
  -N  input is in the N-lattice  -p  partitions only, no Hodge numbers
  -Lv relations among vertices   -Lp relations among points (both in the N-lattice)
  -D  also direct products       -P  also projections      -Q  only direct products
  -c# codimension (default 2)    -F# fibrations up to codimension # (default 2)
  -y  polytope (or weights) in the M-lattice if it has nef partitions
  -S  points in the Gorenstein cones   -T  as -S with all degrees and a Serre duality check
  -s  keep symmetric partitions  -n  first line and N-lattice points if there are nef partitions
  -v  vertices and #points of the input in one line (-u# / -l# bound the number of points)
  -R  vertices of non-reflexive input  -V  vertices of the N-lattice polytope
  -g# points of the Gorenstein polytope in the N-lattice (# = 0, 1, 2; default 1)
  -d# points of the dual Gorenstein polytope (# = 0, 1, 2; default 1)
  -G  input is the support polytope of a Gorenstein cone (index from -c)
Not available: -H (full Hodge diamonds), -m (Minkowski sum input), -t.
Hodge numbers are computed for codimension 1 only.
";

pub const PROMPT: &str = "Degrees and weights  `d1 w11 w12 ... d2 w21 w22 ...'\n  or `#lines #columns' (= `PolyDim #Points' or `#Points PolyDim'):\n";

#[derive(Clone, Debug)]
pub struct Flags {
    pub filter: bool,
    pub n_lattice: bool,
    pub partitions_only: bool,
    pub lv: bool,
    pub lp: bool,
    pub direct: bool,
    pub projections: bool,
    pub only_direct: bool,
    pub codim: usize,
    pub fibrations: Option<usize>,
    pub y: bool,
    pub s_layers: bool,
    pub serre: bool,
    pub keep_symmetric: bool,
    pub n_points: bool,
    pub vertex_line: bool,
    pub upper: Option<usize>,
    pub lower: usize,
    pub show_nonreflexive: bool,
    pub n_vertices: bool,
    pub g: Option<u8>,
    pub d: Option<u8>,
    pub gorenstein: bool,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            filter: false,
            n_lattice: false,
            partitions_only: false,
            lv: false,
            lp: false,
            direct: false,
            projections: false,
            only_direct: false,
            codim: 2,
            fibrations: None,
            y: false,
            s_layers: false,
            serre: false,
            keep_symmetric: false,
            n_points: false,
            vertex_line: false,
            upper: None,
            lower: 0,
            show_nonreflexive: false,
            n_vertices: false,
            g: None,
            d: None,
            gorenstein: false,
        }
    }
}

fn number(rest: &str, opt: &str) -> Result<Option<usize>, CliError> {
    if rest.is_empty() {
        return Ok(None);
    }
    rest.parse()
        .map(Some)
        .map_err(|_| CliError::Usage(format!("option {opt} needs a number")))
}

pub fn parse_flags(opts: &[String]) -> Result<Option<Flags>, CliError> {
    let mut f = Flags::default();
    for o in opts {
        let body = &o[1..];
        let (head, rest) = body.split_at(body.chars().next().map_or(0, |c| c.len_utf8()));
        match head {
            "h" => return Ok(None),
            "f" => f.filter = true,
            "N" => f.n_lattice = true,
            "p" => f.partitions_only = true,
            "L" => match rest {
                "v" => f.lv = true,
                "p" => f.lp = true,
                _ => return Err(CliError::Usage(format!("unknown option {o}"))),
            },
            "D" => f.direct = true,
            "P" => f.projections = true,
            "Q" => f.only_direct = true,
            "c" => {
                f.codim = number(rest, o)?.unwrap_or(2);
                if f.codim == 0 {
                    return Err(CliError::Usage("the codimension must be positive".into()));
                }
            }
            "F" => f.fibrations = Some(number(rest, o)?.unwrap_or(2)),
            "y" => f.y = true,
            "S" => f.s_layers = true,
            "T" => {
                f.s_layers = true;
                f.serre = true;
            }
            "s" => f.keep_symmetric = true,
            "n" => f.n_points = true,
            "v" => f.vertex_line = true,
            "u" => f.upper = number(rest, o)?,
            "l" => f.lower = number(rest, o)?.unwrap_or(0),
            "R" => f.show_nonreflexive = true,
            "V" => f.n_vertices = true,
            "g" | "d" => {
                let m = number(rest, o)?.unwrap_or(1);
                if m > 2 {
                    return Err(CliError::Usage(format!("option {o}: the number must be 0, 1 or 2")));
                }
                if head == "g" {
                    f.g = Some(m as u8);
                } else {
                    f.d = Some(m as u8);
                }
            }
            "G" => f.gorenstein = true,
            "H" | "m" | "t" => {
                return Err(CliError::Capability(format!("option {o} is not available in this tool")));
            }
            _ => return Err(CliError::Usage(format!("unknown option {o}"))),
        }
        if !rest.is_empty() && !matches!(head, "L" | "c" | "F" | "u" | "l" | "g" | "d") {
            return Err(CliError::Usage(format!(
                "unknown option {o}; nef options are given as separate arguments"
            )));
        }
    }
    Ok(Some(f))
}

pub struct Nef {
    pub flags: Flags,
    pub common: Common,
    notice: AtomicBool,
    /// Number of points of every polytope shown with -v, and the number of records seen.
    tally: Mutex<(Vec<usize>, usize)>,
}

pub fn run(l: &Legacy, s: Streams) -> i32 {
    let (opts, inp, out) = match split_args(&l.args) {
        Ok(x) => x,
        Err(e) => return fail(e, s),
    };
    let flags = match parse_flags(&opts) {
        Ok(Some(f)) => f,
        Ok(None) => {
            let _ = s.stdout.write_all(HELP.as_bytes());
            return 0;
        }
        Err(e) => return fail(e, s),
    };
    let filter = flags.filter;
    let job = Nef {
        flags,
        common: l.common.clone(),
        notice: AtomicBool::new(false),
        tally: Mutex::new((Vec::new(), 0)),
    };
    drive(&job, &l.common, filter, inp, out, s)
}

impl Job for Nef {
    fn prompt(&self) -> String {
        PROMPT.into()
    }

    fn ratio(&self) -> i64 {
        if self.flags.gorenstein {
            self.flags.codim as i64
        } else {
            1
        }
    }

    fn process(&self, rec: &Record, io: &mut Io) -> Result<(), CliError> {
        if self.flags.gorenstein {
            return self.gorenstein(rec, io);
        }
        if self.flags.vertex_line {
            return self.vertex_line(rec, io);
        }
        self.partitions(rec, io)
    }

    fn finish(&self, io: &mut Io) {
        if !self.flags.vertex_line {
            return;
        }
        let (counts, total) = &*self.tally.lock().unwrap();
        io.out.push_str(&format!("\n{}  of  {}\n\n", counts.len(), total));
        let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in counts {
            *hist.entry(c).or_default() += 1;
        }
        for (np, k) in hist {
            io.out.push_str(&format!("{np:>4}#{k:>5}\n"));
        }
    }
}

/// The input polytope with all lattice points, and the weights if any.
fn input_polytope(rec: &Record, common: &Common) -> Result<(Option<Cws>, LatticePolytope, FacetSystem), CliError> {
    match &rec.kind {
        RecordKind::Cws(c) => {
            let cp = polytope_from_cws(c)?;
            common.check_points(cp.polytope.np())?;
            Ok((Some(c.clone()), cp.polytope, cp.facets))
        }
        RecordKind::Matrix { points, dim } => {
            common.check_dim(*dim, "dimension")?;
            let (p, f) = analyze(points, *dim)?;
            let p = complete_points(&p, &f)?;
            common.check_points(p.np())?;
            Ok((None, p, f))
        }
    }
}

fn time_suffix(secs: u64, cpu: u64, wide: bool) -> String {
    if wide {
        format!("  {secs:>6}sec  {cpu}cpu")
    } else {
        format!("  {secs:>4}sec  {cpu}cpu")
    }
}

/// `(#all, #interior)` per degree, starting at 1.
fn layer_block(cone: &GorensteinCone, serre: bool) -> Result<String, CliError> {
    let st = cone.st_polynomials(serre)?;
    let mut s = String::from("\n\n#points in largest cone:\n");
    for (k, (all, int)) in st.counts.iter().enumerate() {
        s.push_str(&format!("layer:{:>3} #p:{:>9} #ip:{:>9}\n", k + 1, all, int));
    }
    Ok(s)
}

/// Vertices first, then other points, then points with vanishing lattice part.
fn display_order(points: Vec<Point>, vertices: &[Point], r: usize) -> Vec<Point> {
    let (mut v, mut rest, mut zero) = (Vec::new(), Vec::new(), Vec::new());
    for p in points {
        if vertices.contains(&p) {
            v.push(p);
        } else if p[r..].iter().all(|&x| x == 0) {
            zero.push(p);
        } else {
            rest.push(p);
        }
    }
    v.extend(rest);
    v.extend(zero);
    v
}

impl Nef {
    fn vertex_line(&self, rec: &Record, io: &mut Io) -> Result<(), CliError> {
        let (_, p, _) = input_polytope(rec, &self.common)?;
        let fl = &self.flags;
        let np = p.np();
        {
            let mut t = self.tally.lock().unwrap();
            t.1 += 1;
            if np < fl.lower || fl.upper.is_some_and(|u| np > u) {
                return Ok(());
            }
            t.0.push(np);
        }
        let d = p.dim();
        let rows: Vec<String> = (0..d)
            .map(|i| row(&p.vertices().iter().map(|v| v[i]).collect::<Vec<_>>(), 5))
            .collect();
        io.out.push_str(&format!("{d} {} P:{np} E{}\n", p.nv(), rows.join("E")));
        Ok(())
    }

    fn partitions(&self, rec: &Record, io: &mut Io) -> Result<(), CliError> {
        let fl = &self.flags;
        let (cws, input, inf) = input_polytope(rec, &self.common)?;
        let d = input.dim();
        let r = fl.codim;
        if !inf.is_reflexive() {
            if fl.show_nonreflexive {
                io.out.push_str(&format!("{d} {}  Vertices of input polytope:\n", input.nv()));
                io.out.push_str(&columns(input.vertices(), d, 5));
            }
            return Ok(());
        }
        self.common.check_dim(d + r - 1, &format!("working dimension d+r-1 = {d}+{r}-1 ="))?;
        let ((m, mf), (n, nf)) = if fl.n_lattice {
            (dual(&input, &inf)?, (input, inf))
        } else {
            let nn = dual(&input, &inf)?;
            ((input, inf), nn)
        };
        self.common.check_points(n.np())?;
        let parts = enumerate_nef_partitions(
            &n,
            &nf,
            NefOptions {
                r,
                keep_symmetric: fl.keep_symmetric,
            },
        )?;
        let prefix = cws.as_ref().map(|c| format!("{c} ")).unwrap_or_default();
        let counts = format!("M:{} {} N:{} {}  codim={r} #part={}", m.np(), m.nv(), n.np(), n.nv(), parts.len());
        let out = &mut io.out;
        if fl.y {
            if !parts.is_empty() {
                match cws {
                    Some(_) => out.push_str(&format!("{prefix}{counts}\n")),
                    None => {
                        out.push_str(&format!("{d} {} Vertices of Poly in M-lattice:  {counts}\n", m.nv()));
                        out.push_str(&columns(m.vertices(), d, 5));
                    }
                }
            }
            return Ok(());
        }
        let plain = |p: &NefPartition| !p.is_projection && !p.is_direct_product;
        if fl.n_points {
            if parts.iter().any(plain) {
                out.push_str(&format!("{prefix}{counts}\n"));
                out.push_str(&format!("{d} {}  Points of Poly in N-Lattice:\n", n.np()));
                out.push_str(&columns(n.points(), d, 5));
            }
            return Ok(());
        }
        out.push_str(&format!("{prefix}{counts}\n"));
        if fl.n_vertices {
            out.push_str(&format!("{d} {}  Vertices of P:\n", n.nv()));
            out.push_str(&columns(n.vertices(), d, 5));
        }
        let nonzero: Vec<Point> = n.points().iter().filter(|x| x.iter().any(|&y| y != 0)).cloned().collect();
        let relations: Option<Vec<Vec<i64>>> = if fl.lp {
            out.push_str(&format!("{d} {}  Points of Poly in N-Lattice:\n", n.np()));
            out.push_str(&columns(n.points(), d, 5));
            out.push_str(&dashes(5 * n.np()));
            out.push('\n');
            Some(relation_lines(out, &nonzero, d)?)
        } else if fl.lv {
            out.push_str(&format!("{d} {} Vertices in N-lattice:\n", n.nv()));
            out.push_str(&columns(n.vertices(), d, 5));
            out.push_str(&dashes(5 * n.nv()));
            out.push('\n');
            Some(relation_lines(out, n.vertices(), d)?)
        } else {
            None
        };
        if let Some(k) = fl.fibrations {
            out.push_str(&fibration_lines(n.points(), d, k)?);
        }
        if r >= 2 && !fl.partitions_only && !self.notice.swap(true, Ordering::SeqCst) {
            io.err
                .push_str("note: Hodge numbers are computed for codimension 1 only; H: fields are omitted\n");
        }
        let hodge = if r == 1 && !fl.partitions_only && d >= 3 {
            Some(hodge_numbers((&m, &mf), (&n, &nf))?)
        } else {
            None
        };
        let (mut np_count, mut dp_count, mut proj_count) = (0, 0, 0);
        for (i, p) in parts.iter().enumerate() {
            let start = Instant::now();
            let listed = if fl.only_direct {
                if p.is_projection {
                    np_count += 1;
                } else if p.is_direct_product {
                    dp_count += 1;
                } else {
                    np_count += 1;
                }
                p.is_direct_product && !p.is_projection
            } else if p.is_projection {
                proj_count += 1;
                fl.projections
            } else if p.is_direct_product {
                dp_count += 1;
                fl.direct
            } else {
                np_count += 1;
                true
            };
            if !listed {
                continue;
            }
            if fl.g.is_some() || fl.d.is_some() {
                if let Some(mode) = fl.g {
                    let c = support_cone(&n, p)?;
                    let pts = lift_matrix(&n, p, mode);
                    let rows = pts.first().map_or(0, |x| x.len());
                    io.out.push_str(&format!(
                        "{rows} {} Points of PG: (nv={})\n",
                        pts.len(),
                        c.support.nv()
                    ));
                    io.out.push_str(&columns(&pts, rows, 5));
                }
                if let Some(mode) = fl.d {
                    io.out.push_str(&dual_points_block(&n, p, mode)?);
                }
                continue;
            }
            if fl.s_layers && plain(p) {
                io.out.push_str(&layer_block(&support_cone(&n, p)?, fl.serre)?);
                io.out.push_str(&layer_block(&dual_gorenstein(&n, p)?, fl.serre)?);
            }
            let mut line = String::new();
            if let Some(h) = &hodge {
                match h.euler() {
                    Some(e) => line.push_str(&format!("H:{} {} [{e}] ", h.h11, h.h1_dm2)),
                    None => line.push_str(&format!("H:{} {} ", h.h11, h.h1_dm2)),
                }
            } else {
                line.push(' ');
            }
            line.push_str(&format!("P:{i}"));
            let nv = n.nv();
            let part_text = |l: usize| {
                let mut t = render::joined(&p.part(l));
                let pts: Vec<usize> = p
                    .point_part(l, nv)
                    .into_iter()
                    .filter(|&j| n.points()[j].iter().any(|&x| x != 0))
                    .collect();
                if !pts.is_empty() {
                    t.push_str("  ");
                    t.push_str(&render::joined(&pts));
                }
                t
            };
            if r == 2 {
                line.push_str(&format!(" V:{}", part_text(1)));
            } else if r > 2 {
                let vs: Vec<String> = (1..r).map(|l| format!("V{}:{}", l - 1, part_text(l))).collect();
                line.push(' ');
                line.push_str(&vs.join("  "));
            }
            let mut extra = false;
            if dual_has_singleton(&n, p)? {
                line.push_str(" DP");
                extra = true;
            }
            if let Some(rel) = &relations {
                let degs = partition_degrees(p, rel, fl.lp);
                let t: Vec<String> = degs.iter().map(|x| format!("({})", render::joined(x))).collect();
                line.push_str("   ");
                line.push_str(&t.join(" "));
                extra = true;
            }
            if p.is_direct_product && (fl.direct || fl.only_direct) {
                line.push_str("   D");
                extra = true;
            }
            let secs = start.elapsed().as_secs();
            if r == 1 {
                line.push_str(&format!(" {secs:>6}sec  {secs}cpu"));
            } else {
                line.push_str(&time_suffix(secs, secs, !extra));
            }
            io.out.push_str(&line);
            io.out.push('\n');
        }
        if fl.only_direct {
            proj_count = 0;
        }
        io.out.push_str(&format!("np={np_count} d:{dp_count} p:{proj_count}    0sec     0cpu\n"));
        Ok(())
    }

    fn gorenstein(&self, rec: &Record, io: &mut Io) -> Result<(), CliError> {
        let fl = &self.flags;
        let r = fl.codim as i64;
        let (prefix, degree, gens, input_vertices, dim) = match &rec.kind {
            RecordKind::Cws(c) => {
                let (deg, gens) = support_from_weights(&c.degrees, &c.weights, r)?;
                (format!("{c} "), deg, gens, None, 0)
            }
            RecordKind::Matrix { points, dim } => {
                self.common.check_dim(*dim, "dimension")?;
                let (deg, gens) = support_from_points(points);
                (String::new(), deg, gens, Some(points.clone()), *dim)
            }
        };
        let cone = GorensteinCone::from_generators(&degree, &gens)?;
        self.common.check_points(cone.support.np())?;
        let (a, b) = if fl.n_lattice { ("N", "M") } else { ("M", "N") };
        let head = format!("{a}:{} {}", cone.support.np(), cone.support.nv());
        let out = &mut io.out;
        let show_input = |out: &mut String| {
            if fl.show_nonreflexive {
                match &input_vertices {
                    Some(pts) => {
                        let (p, _) = analyze(pts, dim).expect("input analyzed before");
                        out.push_str(&format!("{dim} {}  Vertices of input polytope:\n", p.nv()));
                        out.push_str(&columns(p.vertices(), dim, 5));
                    }
                    None => {
                        let v = cone.vertices();
                        let rows = v.first().map_or(0, |x| x.len());
                        out.push_str(&format!("{rows} {}  Vertices of input polytope:\n", v.len()));
                        out.push_str(&columns(&v, rows, 5));
                    }
                }
            }
        };
        match cone.dual()? {
            DualCone::Gorenstein { cone: dc, index } if index == r => {
                out.push_str(&format!("{prefix}{head} {b}:{} {}\n", dc.support.np(), dc.support.nv()));
                if fl.n_vertices {
                    let v = dc.vertices();
                    let rows = v.first().map_or(0, |x| x.len());
                    out.push_str(&format!("{rows} {}  Vertices of the dual support polytope:\n", v.len()));
                    out.push_str(&columns(&v, rows, 5));
                }
                if fl.s_layers {
                    out.push_str(&layer_block(&cone, fl.serre)?);
                    out.push_str(&layer_block(&dc, fl.serre)?);
                }
                let (ncone, mcone) = if fl.n_lattice { (&cone, &dc) } else { (&dc, &cone) };
                if fl.g.is_some() {
                    let pts = ncone.points();
                    let rows = pts.first().map_or(0, |x| x.len());
                    out.push_str(&format!("{rows} {} Points of PG: (nv={})\n", pts.len(), ncone.support.nv()));
                    out.push_str(&columns(&pts, rows, 5));
                }
                if fl.d.is_some() {
                    let pts = mcone.points();
                    let rows = pts.first().map_or(0, |x| x.len());
                    out.push_str(&format!("{rows} {} Points of dual PG: (nv={})\n", pts.len(), mcone.support.nv()));
                    out.push_str(&columns(&pts, rows, 4));
                }
            }
            DualCone::Gorenstein { cone: dc, index } => {
                out.push_str(&format!(
                    "{prefix}Warning: Input has index {index}, should be {r}!   {head} F:{}\n",
                    dc.support.nv()
                ));
                show_input(out);
            }
            DualCone::NotGorenstein { facets } => {
                out.push_str(&format!("{prefix}{head} F:{facets}\n"));
                show_input(out);
            }
        }
        Ok(())
    }
}

fn relation_lines(out: &mut String, points: &[Point], d: usize) -> Result<Vec<Vec<i64>>, CliError> {
    let sims = ip_simplices(points, d, None)?;
    for s in &sims {
        out.push_str(&format!("{}  d={}  codim={}\n", row(&s.weights, 5), s.degree, s.codim));
    }
    Ok(sims.into_iter().map(|s| s.weights).collect())
}

/// Points of the dual Gorenstein polytope: all coordinates, without the first, or the lattice part only.
fn dual_points_block(n: &LatticePolytope, p: &NefPartition, mode: u8) -> Result<String, CliError> {
    let c = dual_gorenstein(n, p)?;
    let r = p.r;
    let pts = display_order(c.points(), &c.vertices(), r);
    let shown: Vec<Point> = match mode {
        2 => pts,
        1 => pts.into_iter().map(|x| x[1..].to_vec()).collect(),
        _ => {
            let mut seen = Vec::new();
            for x in pts {
                let y = x[r..].to_vec();
                if !seen.contains(&y) {
                    seen.push(y);
                }
            }
            seen
        }
    };
    let rows = shown.first().map_or(0, |x| x.len());
    let mut s = format!("{rows} {} Points of dual PG: (nv={})\n", shown.len(), c.support.nv());
    s.push_str(&columns(&shown, rows, 4));
    Ok(s)
}
