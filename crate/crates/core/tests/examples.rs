macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }

        #[test]
        fn $name() {
            $name::run().expect("example runs");
        }
    };
}

example!(closed_forms);
example!(statevector_check);
example!(optimize_phase);
example!(unknown_m);
example!(cost_curves);
example!(figure_curves);
