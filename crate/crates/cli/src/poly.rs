//! `latpoly poly`: polytope data.

use latpoly::canonical::{affine_normal_form, find_isomorphism, normal_form, symmetry_counts};
use latpoly::cws::{polytope_from_cws, span_check, Cws, CwsPolytope};
use latpoly::gorenstein::GorensteinCone;
use latpoly::hodge::hodge_numbers;
use latpoly::linalg::{self, IntMatrix};
use latpoly::polytope::{
    analyze, complete_points, divisibility, dual, facet_local_coordinates, facets_of, incidence_structure,
    pairing_matrix, volume_barycenter,
};
use latpoly::simplices::{fibration_scan, ip_simplices, lattice_quotient, simplex_quotient};
use latpoly::{FacetSystem, LatticePolytope, Point};

use crate::input::{Record, RecordKind};
use crate::render::{self, block, columns, dashes, row};
use crate::{drive, fail, split_args, CliError, Common, Io, Job, Legacy, Streams};

pub const HELP: &str = "\
Option strings (concatenate letters, e.g. -gve):
  h  this information            f  use as filter (no prompts)
  g  general output: #points/#vertices, dual data and Hodge numbers, or #facets
  p  points of P                 v  vertices of P
  e  equations of P, or vertices of P-dual if P is reflexive
  m  pairing matrix between vertices and equations
  d  points of P-dual (P reflexive)      a  same as gpvemd
  r  ignore non-reflexive input          D  input is the dual polytope (reflexive only)
  n  do not complete the point list      i  incidence information
  s  span property (weight input)        I  interior point property
  S  number of symmetries                T  upper triangular coordinates of the input points
  N  normal form                         A  affine normal form
  B  volume and barycenter; B# also lists cone points up to level #
  F  facets in facet lattice coordinates G  divisibility of P
  V  IP simplices among vertices of P*   P  IP simplices among points of P* (P# bounds codim)
  Z  lattice quotients of IP simplices   1,2,3  fibrations spanned by IP simplices
Not available: l L U C E t and two-digit fibration options.
Input: `d1 w11 w12 ... d2 w21 ...' or `#lines #columns' followed by the coordinates.
";

pub const PROMPT: &str = "Degrees and weights  `d1 w11 w12 ... d2 w21 w22 ...'\n  or `#lines #columns' (= `PolyDim #Points' or `#Points PolyDim'):\n";

#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub help: bool,
    pub filter: bool,
    pub general: bool,
    pub points: bool,
    pub vertices: bool,
    pub equations: bool,
    pub pairing: bool,
    pub dual_points: bool,
    pub reflexive_only: bool,
    pub dual_input: bool,
    pub no_complete: bool,
    pub incidence: bool,
    pub span: bool,
    pub ip: bool,
    pub symmetries: bool,
    pub triangular: bool,
    pub normal: bool,
    pub affine: bool,
    pub bary: Option<u32>,
    pub facets: bool,
    pub divisible: bool,
    pub ip_vertices: bool,
    pub ip_points: bool,
    pub ip_codim: Option<usize>,
    pub quotients: bool,
    pub fibration: Option<usize>,
}

fn digits(chars: &[char], i: &mut usize) -> Option<u32> {
    let start = *i;
    while *i < chars.len() && chars[*i].is_ascii_digit() {
        *i += 1;
    }
    (start < *i).then(|| chars[start..*i].iter().collect::<String>().parse().unwrap_or(u32::MAX))
}

pub fn parse_flags(opts: &[String]) -> Result<Flags, CliError> {
    let mut f = Flags::default();
    for o in opts {
        let chars: Vec<char> = o.chars().skip(1).collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            i += 1;
            match c {
                'h' => f.help = true,
                'f' => f.filter = true,
                'g' => f.general = true,
                'p' => f.points = true,
                'v' => f.vertices = true,
                'e' => f.equations = true,
                'm' => f.pairing = true,
                'd' => f.dual_points = true,
                'a' => {
                    f.general = true;
                    f.points = true;
                    f.vertices = true;
                    f.equations = true;
                    f.pairing = true;
                    f.dual_points = true;
                }
                'r' => f.reflexive_only = true,
                'D' => f.dual_input = true,
                'n' => f.no_complete = true,
                'i' => f.incidence = true,
                's' => f.span = true,
                'I' => f.ip = true,
                'S' => f.symmetries = true,
                'T' => f.triangular = true,
                'N' => f.normal = true,
                'A' => f.affine = true,
                'B' => f.bary = Some(digits(&chars, &mut i).unwrap_or(0)),
                'F' => f.facets = true,
                'G' => f.divisible = true,
                'V' => f.ip_vertices = true,
                'P' => {
                    f.ip_points = true;
                    f.ip_codim = digits(&chars, &mut i).map(|n| n as usize);
                }
                'Z' => f.quotients = true,
                '0'..='9' => {
                    i -= 1;
                    let n = digits(&chars, &mut i).unwrap_or(0);
                    if !(1..=3).contains(&n) {
                        return Err(CliError::Capability(format!(
                            "option -{n}: only single-digit fibration options 1, 2, 3 are available"
                        )));
                    }
                    f.fibration = Some(n as usize);
                }
                'l' | 'L' | 'U' | 'C' | 'E' | 't' => {
                    return Err(CliError::Capability(format!("option -{c} is not available in this tool")));
                }
                other => return Err(CliError::Usage(format!("unknown option -{other}"))),
            }
        }
    }
    if !f.has_output() {
        if f.triangular {
            return Err(CliError::Usage("-T changes coordinates only; combine it with an output option such as -v".into()));
        }
        f.general = true;
    }
    Ok(f)
}

impl Flags {
    fn has_output(&self) -> bool {
        self.general
            || self.points
            || self.vertices
            || self.equations
            || self.pairing
            || self.dual_points
            || self.incidence
            || self.span
            || self.ip
            || self.symmetries
            || self.normal
            || self.affine
            || self.bary.is_some()
            || self.facets
            || self.divisible
            || self.ip_vertices
            || self.ip_points
            || self.fibration.is_some()
    }

    fn needs_dual(&self) -> bool {
        self.general || self.dual_points || self.ip_vertices || self.ip_points || self.fibration.is_some()
    }
}

pub struct Poly {
    pub flags: Flags,
    pub common: Common,
    /// Re-express output coordinates in the basis of the normal form.
    pub canonical_coords: bool,
}

pub fn run(l: &Legacy, s: Streams) -> i32 {
    let (opts, canonical_coords) = take_long(&l.args, "--normal-form");
    let (opts, inp, out) = match split_args(&opts) {
        Ok(x) => x,
        Err(e) => return fail(e, s),
    };
    let flags = match parse_flags(&opts) {
        Ok(f) => f,
        Err(e) => return fail(e, s),
    };
    if flags.help {
        let _ = s.stdout.write_all(HELP.as_bytes());
        return 0;
    }
    let filter = flags.filter;
    let job = Poly {
        flags,
        common: l.common.clone(),
        canonical_coords,
    };
    drive(&job, &l.common, filter, inp, out, s)
}

/// Removes a long flag that may appear among the option strings.
pub fn take_long(args: &[String], name: &str) -> (Vec<String>, bool) {
    let found = args.iter().any(|a| a == name);
    (args.iter().filter(|a| *a != name).cloned().collect(), found)
}


/// `g` with `x -> x * g` mapping `p` onto the polytope whose vertices are the normal form columns.
pub fn normal_form_map(p: &LatticePolytope, f: &FacetSystem) -> Result<Vec<Vec<i64>>, CliError> {
    let nf = normal_form(p, f)?;
    let d = p.dim();
    let cols: Vec<Point> = (0..nf.matrix.first().map_or(0, |r| r.len()))
        .map(|j| (0..d).map(|i| nf.matrix[i][j]).collect())
        .collect();
    let (q, fq) = analyze(&cols, d)?;
    find_isomorphism(p, f, &q, &fq)?.ok_or_else(|| CliError::Domain("normal form is not isomorphic to the input".into()))
}

/// Upper triangular coordinates of the input points (row Hermite form of the coordinate matrix).
fn triangular(points: &[Point], dim: usize) -> Result<(Vec<Point>, usize), CliError> {
    let rows: Vec<Vec<i64>> = (0..dim).map(|i| points.iter().map(|p| p[i]).collect()).collect();
    let h = linalg::hnf(&IntMatrix::from_i64_rows(&rows, points.len()));
    let hr = h.h.to_i64_rows()?;
    let rank = h.rank();
    let pts = (0..points.len()).map(|j| (0..rank).map(|i| hr[i][j]).collect()).collect();
    Ok((pts, rank))
}

struct Data {
    cws: Option<Cws>,
    cp: Option<CwsPolytope>,
    p: LatticePolytope,
    f: FacetSystem,
    /// Complete dual, when `p` is reflexive and it was needed.
    n: Option<(LatticePolytope, FacetSystem)>,
}

impl Poly {
    fn load(&self, rec: &Record) -> Result<Option<Data>, CliError> {
        let fl = &self.flags;
        let (cws, cp, mut p, mut f) = match &rec.kind {
            RecordKind::Cws(c) => {
                let cp = polytope_from_cws(c)?;
                self.common.check_dim(cp.polytope.dim(), "dimension")?;
                (Some(c.clone()), Some(cp.clone()), cp.polytope, cp.facets)
            }
            RecordKind::Matrix { points, dim } => {
                self.common.check_dim(*dim, "dimension")?;
                let (pts, d) = if fl.triangular {
                    triangular(points, *dim)?
                } else {
                    (points.clone(), *dim)
                };
                let (p, f) = analyze(&pts, d)?;
                (None, None, p, f)
            }
        };
        let mut n = None;
        if fl.dual_input {
            if !f.is_reflexive() {
                return Err(CliError::Domain("input polytope is not reflexive; -D needs reflexive input".into()));
            }
            let pn = complete_points(&p, &f)?;
            self.common.check_points(pn.np())?;
            let (m, mf) = dual(&pn, &f)?;
            n = Some((pn, f));
            p = m;
            f = mf;
        } else if !fl.no_complete && !p.is_complete() {
            p = complete_points(&p, &f)?;
        }
        self.common.check_points(p.np())?;
        let reflexive = f.is_reflexive();
        if fl.reflexive_only && !reflexive {
            return Ok(None);
        }
        if self.canonical_coords {
            let g = normal_form_map(&p, &f)?;
            p = p.transform(&g);
            f = facets_of(&p)?;
            n = None;
        }
        if reflexive && n.is_none() && fl.needs_dual() && !fl.no_complete {
            let (d, df) = dual(&p, &f)?;
            self.common.check_points(d.np())?;
            n = Some((d, df));
        }
        Ok(Some(Data { cws, cp, p, f, n }))
    }
}

impl Job for Poly {
    fn prompt(&self) -> String {
        PROMPT.into()
    }

    fn process(&self, rec: &Record, io: &mut Io) -> Result<(), CliError> {
        let Some(data) = self.load(rec)? else {
            return Ok(());
        };
        let fl = &self.flags;
        let out = &mut io.out;
        let Data { cws, cp, p, f, n } = &data;
        let d = p.dim();
        if fl.general {
            out.push_str(&general_line(cws.as_ref(), p, f, n.as_ref())?);
            out.push('\n');
        }
        if fl.ip && !f.is_ip() {
            out.push_str("The origin is not an interior point of P\n");
        }
        if fl.span {
            if let (Some(c), Some(cp)) = (cws, cp) {
                if !span_check(c, cp) {
                    out.push_str("No span property: some coordinate hyperplanes are not facets\n");
                }
            }
        }
        if fl.symmetries {
            let (gl, vpm) = symmetry_counts(p, f)?;
            out.push_str(&format!("#GL(Z,{d})-Symmetries={gl}, #VPM-Symmetries={vpm}\n"));
        }
        if fl.normal {
            let nf = normal_form(p, f)?;
            let perm = if nf.perm.iter().all(|&i| i < 10) {
                nf.perm.iter().map(|i| i.to_string()).collect::<String>()
            } else {
                render::joined(&nf.perm)
            };
            out.push_str(&format!("{d} {}  Normal form of vertices of P    perm={perm}\n", p.nv()));
            out.push_str(&render::rows(&nf.matrix, 4));
        }
        if fl.affine {
            let a = affine_normal_form(p, f)?;
            out.push_str(&format!("{d} {}  Affine normal form of vertices of P\n", p.nv()));
            out.push_str(&render::rows(&a, 4));
        }
        if let Some(level) = fl.bary {
            out.push_str(&barycenter(p)?);
            if level > 0 {
                out.push_str(&cone_points(p, f, level as i64)?);
            }
        }
        if fl.divisible {
            let (g, _) = divisibility(p);
            if g > 1 {
                out.push_str(&format!("Divisible by {g}\n"));
                out.push_str(&block(d, p.vertices(), "Vertices of P", 5));
            }
        }
        if fl.vertices {
            out.push_str(&block(d, p.vertices(), "Vertices of P", 5));
        }
        if fl.points {
            out.push_str(&block(d, p.points(), "Points of P", 5));
        }
        if fl.equations {
            out.push_str(&equations(p, f));
        }
        if fl.pairing {
            out.push_str(&format!("{} {}  Pairing matrix of vertices and equations of P\n", p.nv(), f.len()));
            out.push_str(&render::rows(&pairing_matrix(p, f), 4));
        }
        if fl.dual_points {
            if let Some((np, _)) = n {
                out.push_str(&block(d, np.points(), "Points of P-dual", 5));
            }
        }
        if fl.incidence {
            let inc = incidence_structure(p, f);
            for (i, faces) in inc.faces.iter().enumerate().rev() {
                let vs: Vec<String> = faces.iter().map(|fc| fc.vertices.to_string_rl()).collect();
                out.push_str(&format!("v[{i}]: {}\n", vs.join(" ")));
            }
            for (i, faces) in inc.faces.iter().enumerate().rev() {
                let fs: Vec<String> = faces.iter().map(|fc| fc.facets.to_string_rl()).collect();
                out.push_str(&format!("f[{i}]: {}\n", fs.join(" ")));
            }
        }
        if fl.facets {
            for (j, local) in facet_local_coordinates(p, f).iter().enumerate() {
                out.push_str(&block(d.saturating_sub(1), local, &format!("Vertices of facet {j}"), 5));
            }
        }
        if fl.ip_vertices || fl.ip_points || fl.fibration.is_some() {
            match n {
                Some((np, _)) => {
                    if fl.ip_vertices {
                        out.push_str(&ip_block(np.vertices(), d, true, None, fl.quotients)?);
                    }
                    if fl.ip_points {
                        out.push_str(&ip_block(np.points(), d, false, fl.ip_codim, fl.quotients)?);
                    }
                    if let Some(k) = fl.fibration {
                        out.push_str(&fibration_block(np.points(), d, k)?);
                    }
                }
                None => io.err.push_str("IP simplices and fibrations need a reflexive polytope\n"),
            }
        }
        Ok(())
    }
}

fn general_line(
    cws: Option<&Cws>,
    p: &LatticePolytope,
    f: &FacetSystem,
    n: Option<&(LatticePolytope, FacetSystem)>,
) -> Result<String, CliError> {
    let mut s = String::new();
    if let Some(c) = cws {
        s.push_str(&format!("{c} "));
    }
    s.push_str(&format!("M:{} {}", p.np(), p.nv()));
    match n {
        Some((np, nf)) if f.is_reflexive() && p.is_complete() => {
            s.push_str(&format!(" N:{} {}", np.np(), np.nv()));
            let d = p.dim();
            if d >= 3 {
                let h = hodge_numbers((p, f), (np, nf))?;
                match d {
                    3 => s.push_str(&format!(" Pic:{} Cor:{}", h.h11, h.correction)),
                    4 => s.push_str(&format!(" H:{},{} [{}]", h.h11, h.h1_dm2, h.euler().unwrap_or(0))),
                    _ => s.push_str(&format!(" H:{},{}", h.h11, h.h1_dm2)),
                }
            }
        }
        _ => s.push_str(&format!(" F:{}", f.len())),
    }
    Ok(s)
}

fn equations(p: &LatticePolytope, f: &FacetSystem) -> String {
    let d = p.dim();
    let mut s = String::new();
    if f.is_reflexive() {
        s.push_str(&format!("{} {}  Vertices of P-dual <-> Equations of P\n", f.len(), d));
        for fa in &f.facets {
            s.push_str(&row(&fa.normal, 4));
            s.push('\n');
        }
    } else {
        s.push_str(&format!("{} {}  Equations of P\n", f.len(), d));
        for fa in &f.facets {
            s.push_str(&format!("{}{:>6}\n", row(&fa.normal, 4), fa.offset));
        }
    }
    s
}

fn barycenter(p: &LatticePolytope) -> Result<String, CliError> {
    let (vol, bc) = volume_barycenter(p)?;
    let parse = |x: String| x.parse::<i128>().map_err(|_| CliError::Domain("barycenter too large to print".into()));
    let mut den: i128 = 1;
    let mut fr = Vec::new();
    for x in &bc {
        let (a, b) = (parse(x.numer().to_string())?, parse(x.denom().to_string())?);
        den = lcm(den, b);
        fr.push((a, b));
    }
    let nums: Vec<String> = fr.iter().map(|(a, b)| (a * (den / b)).to_string()).collect();
    Ok(format!("vol={vol}, baricent=({})/{den}\n", nums.join(",")))
}

fn lcm(a: i128, b: i128) -> i128 {
    let (mut x, mut y) = (a.abs(), b.abs());
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a.abs() / x * b.abs()
}

/// Points of the cone over the non-origin vertices, levels `k..1` then the origin, with the
/// codimension of the smallest cone face containing them.
fn cone_points(p: &LatticePolytope, f: &FacetSystem, kmax: i64) -> Result<String, CliError> {
    let d = p.dim();
    let base: Vec<&latpoly::Facet> = f.facets.iter().filter(|fa| fa.offset != 0).collect();
    let bad = || CliError::Domain("-B# needs the origin plus a lattice polytope at level one".into());
    if base.len() != 1 || p.index_of(&vec![0; d]).is_none() {
        return Err(bad());
    }
    // normal . x + offset >= 0, equality on the level one facet
    let c = base[0].offset;
    if base[0].normal.iter().any(|x| x % c != 0) {
        return Err(bad());
    }
    let degree: Vec<i64> = base[0].normal.iter().map(|x| -x / c).collect();
    let gens: Vec<Point> = p.vertices().iter().filter(|v| v.iter().any(|&x| x != 0)).cloned().collect();
    let cone = GorensteinCone::from_generators(&degree, &gens)?;
    let sup = &cone.support;
    let sd = sup.dim();
    let mut s = String::from("IPs:\n");
    for k in (1..=kmax).rev() {
        let scaled: Vec<Point> = sup.vertices().iter().map(|v| v.iter().map(|x| x * k).collect()).collect();
        let (q, qf) = analyze(&scaled, sd)?;
        let q = complete_points(&q, &qf)?;
        for z in q.points() {
            let tight: Vec<Vec<i64>> = cone
                .facets
                .facets
                .iter()
                .filter(|fa| linalg::dot(&fa.normal, z) + k * fa.offset == 0)
                .map(|fa| fa.normal.clone())
                .collect();
            let cd = if tight.is_empty() { 0 } else { linalg::rank_i64(&tight, sd) };
            let x = cone.to_ambient(k, z);
            s.push_str(&format!(" {}  cd={cd}\n", render::joined(&x)));
        }
    }
    s.push_str(&format!(" {}  cd={}\n", render::joined(&vec![0; d]), sd + 1));
    Ok(s)
}

/// The IP simplex table over `list` (vertices or all points of P*, origin skipped in the weights).
pub fn ip_block(list: &[Point], d: usize, vertices: bool, max_codim: Option<usize>, quotients: bool) -> Result<String, CliError> {
    let nonzero: Vec<Point> = list.iter().filter(|x| x.iter().any(|&y| y != 0)).cloned().collect();
    let sims = ip_simplices(&nonzero, d, max_codim)?;
    let what = if vertices { "vertices" } else { "points" };
    let mut s = format!("{d} {}  {what} of P-dual and IP-simplices\n", list.len());
    s.push_str(&columns(list, d, 5));
    s.push_str(&dashes(5 * nonzero.len()));
    s.push_str(if vertices { "   " } else { "    " });
    s.push_str(&format!("#IP-simp={}", sims.len()));
    if quotients {
        let (idx, qs) = lattice_quotient(&nonzero, d)?;
        s.push_str(&format!(" I={idx}"));
        s.push_str(&quotient_text(&qs));
    }
    s.push('\n');
    for sim in &sims {
        s.push_str(&row(&sim.weights, 5));
        if vertices {
            s.push_str(&format!("{:>5}=d  codim={}", sim.degree, sim.codim));
        } else {
            s.push_str(&format!("{:>4}=d  codim={}", sim.degree, sim.codim));
        }
        if quotients {
            let (idx, qs) = simplex_quotient(&nonzero, sim, d)?;
            if idx > 1 {
                s.push_str(&quotient_text(&qs));
            }
        }
        s.push('\n');
    }
    Ok(s)
}

fn quotient_text(qs: &[latpoly::cws::Quotient]) -> String {
    qs.iter()
        .map(|q| format!(" /Z{}: {}", q.order, render::joined(&q.phases)))
        .collect()
}

/// Fibrations over the nonzero points of `points`, without the point matrix.
pub fn fibration_lines(points: &[Point], d: usize, max_codim: usize) -> Result<String, CliError> {
    let nonzero: Vec<Point> = points.iter().filter(|x| x.iter().any(|&y| y != 0)).cloned().collect();
    let fibs = fibration_scan(&nonzero, d, max_codim)?;
    let mut s = format!("{} #fibrations={}\n", dashes(5 * nonzero.len()), fibs.len());
    for fb in &fibs {
        let marks: String = fb.marks.iter().map(|c| format!("{c:>5}")).collect();
        s.push_str(&format!(
            "{marks}  cd={}  m:{:>3} {:>2} n:{:>2} {}\n",
            fb.codim, fb.dual_points, fb.dual_vertices, fb.fiber_points, fb.fiber_vertices
        ));
    }
    Ok(s)
}

fn fibration_block(points: &[Point], d: usize, max_codim: usize) -> Result<String, CliError> {
    let mut s = block(d, points, "Points of P-dual", 5);
    s.push_str(&fibration_lines(points, d, max_codim)?);
    Ok(s)
}

