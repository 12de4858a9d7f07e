use super::{MultiPoly, PolyError};

/// Resultant of `f` and `g` with respect to the symbol `var`: the determinant
/// of their Sylvester matrix, by fraction-free (Bareiss) elimination.
pub fn resultant(f: &MultiPoly, g: &MultiPoly, var: &str) -> Result<MultiPoly, PolyError> {
    f.ensure_same_symbols(g)?;
    let v = f.symbol_index(var)?;
    let zero = MultiPoly::zero(f.symbols());
    if f.is_zero() || g.is_zero() {
        return Ok(zero);
    }
    let fc = f.to_univariate(v);
    let gc = g.to_univariate(v);
    let (m, n) = (fc.len() - 1, gc.len() - 1);
    if m == 0 && n == 0 {
        return Ok(MultiPoly::one(f.symbols()));
    }
    if m == 0 {
        return Ok(fc[0].pow(n as u32));
    }
    if n == 0 {
        return Ok(gc[0].pow(m as u32));
    }
    let size = m + n;
    let mut rows: Vec<Vec<MultiPoly>> = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![zero.clone(); size];
        for (k, c) in fc.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![zero.clone(); size];
        for (k, c) in gc.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    bareiss_det(rows)
}

fn bareiss_det(mut a: Vec<Vec<MultiPoly>>) -> Result<MultiPoly, PolyError> {
    let n = a.len();
    let symbols = a[0][0].symbols().to_vec();
    let mut prev = MultiPoly::one(&symbols);
    let mut negate = false;
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(MultiPoly::zero(&symbols)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_discriminant_form() {
        // Res_x(a x^2 + b x + c, 2 a x + b) = -a (b^2 - 4 a c)
        let s = ["x", "a", "b", "c"];
        let f = MultiPoly::parse("a*x^2 + b*x + c", &s).unwrap();
        let g = MultiPoly::parse("2*a*x + b", &s).unwrap();
        let want = MultiPoly::parse("-a*(b^2 - 4*a*c)", &s).unwrap();
        assert_eq!(resultant(&f, &g, "x").unwrap(), want);
    }

    #[test]
    fn product_of_root_differences() {
        // Res_x((x-1)(x-2), (x-3)(x+y)) = prod (r_i - s_j)
        let s = ["x", "y"];
        let f = MultiPoly::parse("(x - 1)*(x - 2)", &s).unwrap();
        let g = MultiPoly::parse("(x - 3)*(x + y)", &s).unwrap();
        let want = MultiPoly::parse("(1 - 3)*(1 + y)*(2 - 3)*(2 + y)", &s).unwrap();
        assert_eq!(resultant(&f, &g, "x").unwrap(), want);
    }

    #[test]
    fn common_root_gives_zero() {
        let s = ["x", "t"];
        let f = MultiPoly::parse("(x - t)*(x + 1)", &s).unwrap();
        let g = MultiPoly::parse("(x - t)*(x - 5)", &s).unwrap();
        assert!(resultant(&f, &g, "x").unwrap().is_zero());
    }
}
