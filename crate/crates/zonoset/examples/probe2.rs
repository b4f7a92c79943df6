use zonoset::rangebound::{bound, BoundConfig, Method, Expr};
use zonoset::ZPolytope;

fn main() {
    let set = ZPolytope::new(
        vec![0.0, -0.5], 2,
        vec![(vec![1.0, -0.5], vec![1]), (vec![0.0, 1.5], vec![2]), (vec![1.0, -0.5], vec![1, 2])],
    ).unwrap();
    let f = Expr::Sum(vec![
        Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Sub(Box::new(Expr::Var(0)), Box::new(Expr::Const(1.5)))), 2))),
        Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Sub(Box::new(Expr::Var(1)), Box::new(Expr::Const(1.0)))), 2))),
        Expr::Prod(vec![Expr::Const(4.0), Expr::Prod(vec![
            Expr::Cos(Box::new(Expr::Var(0))), Expr::Sin(Box::new(Expr::Var(1)))])]),
    ]);
    let cfg = BoundConfig { split_depth: 4, method: Method::Pz, ..BoundConfig::default() };
    let b = bound(&f, &set, &cfg).unwrap();
    println!("pz depth 4: {b}");
}
