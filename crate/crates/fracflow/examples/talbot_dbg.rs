use fracflow::quad::{graded_to_zero, gauss_legendre, gl_panel};

fn main() {
    let c: f64 = 0.8;
    let beta: f64 = 0.9;
    let u = 0.6*0.25f64 + 0.8*(-0.3);
    let fx = (c*u).exp();
    let d = c*fx;
    let eval = |s: f64| fx*(-c*s).exp();
    let mut near_int = |s: f64| (fx - eval(s) - s*d)*s.powf(-beta-1.0);
    let near = graded_to_zero(&mut near_int, 1.0, 60, 16);
    println!("near = {near}  (want -0.237451601247)");
    let dterm = d/(1.0-beta);
    println!("dterm = {dterm} (want 7.44424716649)");
    // replicate capped_panels
    let (nodes, weights) = gauss_legendre(16);
    let mut far = 0.0;
    let mut a: f64 = 1.0;
    let mut tail_int = |s: f64| (fx - eval(s))*s.powf(-beta-1.0);
    while a < 256.0 {
        let b = (a*2.0).min(a+1.0).min(256.0);
        far += gl_panel(&mut tail_int, a, b, &nodes, &weights);
        a = b;
    }
    println!("far = {far}   (want 0.832726920042)");
    let tail = fx*256.0f64.powf(-beta)/beta;
    println!("tail = {tail} (want 0.00703189405827)");
    let pref = beta/statrs::function::gamma::gamma(1.0-beta);
    println!("total = {}   want 0.761222796285", pref*(near+dterm+far+tail));
    println!("gamma(0.1) = {} (want 9.51350769866873)", statrs::function::gamma::gamma(0.1));
}
