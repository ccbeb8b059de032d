#[path = "../examples/dyadic_blocks.rs"]
#[allow(dead_code)]
mod dyadic_blocks;

#[path = "../examples/besov_norms.rs"]
#[allow(dead_code)]
mod besov_norms;

#[path = "../examples/circle_dynamics.rs"]
#[allow(dead_code)]
mod circle_dynamics;

#[path = "../examples/transfer_spectrum.rs"]
#[allow(dead_code)]
mod transfer_spectrum;

#[path = "../examples/lasota_yorke.rs"]
#[allow(dead_code)]
mod lasota_yorke;

#[path = "../examples/essential_radius.rs"]
#[allow(dead_code)]
mod essential_radius;

#[path = "../examples/kernel_decay.rs"]
#[allow(dead_code)]
mod kernel_decay;

macro_rules! smoke {
    ($($name:ident),* $(,)?) => {
        $(
            #[test]
            fn $name() {
                $name::run_example().unwrap();
            }
        )*
    };
}

smoke!(
    dyadic_blocks,
    besov_norms,
    circle_dynamics,
    transfer_spectrum,
    lasota_yorke,
    essential_radius,
    kernel_decay,
);
