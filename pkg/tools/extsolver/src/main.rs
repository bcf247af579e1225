use std::env;
use std::fs::File;
use std::io::BufReader;
use std::process::exit;

use varisat::{CnfFormula, Solver};
use varisat::dimacs::DimacsParser;

fn main() {
    let path = env::args().nth(1).expect("usage: extsolver FILE.cnf");
    let file = File::open(&path).expect("cannot open input");
    let formula: CnfFormula =
        DimacsParser::parse(BufReader::new(file)).expect("invalid DIMACS");
    let mut solver = Solver::new();
    solver.add_formula(&formula);
    match solver.solve() {
        Ok(true) => {
            let model = solver.model().unwrap();
            let mut line = String::from("v");
            for lit in model {
                line.push(' ');
                line.push_str(&lit.to_dimacs().to_string());
            }
            line.push_str(" 0");
            println!("{}", line);
            println!("s SATISFIABLE");
            exit(10);
        }
        Ok(false) => {
            println!("s UNSATISFIABLE");
            exit(20);
        }
        Err(e) => {
            eprintln!("solver error: {}", e);
            exit(1);
        }
    }
}
