macro_rules! example_test {
    ($module:ident, $test:ident, $file:literal) => {
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example_test!(interval_spectrum, interval_spectrum_runs, "interval_spectrum.rs");
example_test!(lasso_scattering, lasso_scattering_runs, "lasso_scattering.rs");
example_test!(scar_regularization, scar_regularization_runs, "scar_regularization.rs");
example_test!(greens_function, greens_function_runs, "greens_function.rs");
example_test!(path_sum_oracle, path_sum_oracle_runs, "path_sum_oracle.rs");
example_test!(long_lead_limit, long_lead_limit_runs, "long_lead_limit.rs");
example_test!(graph_files, graph_files_runs, "graph_files.rs");
