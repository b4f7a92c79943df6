use zonoset::rangebound::{bound, BoundConfig, Method, Expr};
use zonoset::ZPolytope;

fn main() {
    let set = ZPolytope::new(
        vec![0.0, -0.5],
        2,
        vec![
            (vec![1.0, -0.5], vec![1]),
            (vec![0.0, 1.5], vec![2]),
            (vec![1.0, -0.5], vec![1, 2]),
        ],
    ).unwrap();
    let f = Expr::Sum(vec![
        Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Sub(Box::new(Expr::Var(0)), Box::new(Expr::Const(1.5)))), 2))),
        Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Sub(Box::new(Expr::Var(1)), Box::new(Expr::Const(1.0)))), 2))),
        Expr::Prod(vec![Expr::Const(4.0), Expr::Prod(vec![
            Expr::Cos(Box::new(Expr::Var(0))),
            Expr::Sin(Box::new(Expr::Var(1))),
        ])]),
    ]);
    for method in [Method::TmBox, Method::Pz] {
        for depth in [0u32, 2, 3, 4, 5, 6, 8] {
            let cfg = BoundConfig { split_depth: depth, method, ..BoundConfig::default() };
            let b = bound(&f, &set, &cfg).unwrap();
            println!("{method:?} depth {depth}: {b}  (width {})", b.width());
        }
    }
    println!("needed at depth 4 (pz): contains [-14.8872,1.4094], inside [-19.74,2.31]");
}
