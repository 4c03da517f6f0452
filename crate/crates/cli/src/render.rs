//! Fixed-width text layouts.

use std::fmt::Write;

use latpoly::Point;

/// Points as columns: one line per coordinate, entries right aligned in `width`.
pub fn columns(points: &[Point], dim: usize, width: usize) -> String {
    let mut s = String::new();
    for j in 0..dim {
        for p in points {
            let _ = write!(s, "{:>width$}", p[j]);
        }
        s.push('\n');
    }
    s
}

/// Rows as given, entries right aligned in `width`.
pub fn rows(rows: &[Vec<i64>], width: usize) -> String {
    let mut s = String::new();
    for r in rows {
        s.push_str(&row(r, width));
        s.push('\n');
    }
    s
}

pub fn row(r: &[i64], width: usize) -> String {
    r.iter().map(|x| format!("{x:>width$}")).collect()
}

pub fn joined<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn dashes(n: usize) -> String {
    "-".repeat(n)
}

/// `header` line followed by the points as columns.
pub fn block(dim: usize, points: &[Point], title: &str, width: usize) -> String {
    format!("{} {}  {}\n{}", dim, points.len(), title, columns(points, dim, width))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_layout() {
        let s = block(2, &[vec![1, 0], vec![0, 1], vec![-1, -1]], "Vertices of P", 5);
        assert_eq!(s, "2 3  Vertices of P\n    1    0   -1\n    0    1   -1\n");
        assert_eq!(row(&[2, -1], 4), "   2  -1");
    }
}
