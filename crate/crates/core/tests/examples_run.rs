// Every example must run to completion.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));

            pub fn run() {
                main().unwrap();
            }
        }

        #[test]
        fn $name() {
            $name::run();
        }
    };
}

example!(granule_basics);
example!(separable_stream);
example!(semi_supervised);
example!(concept_drift);
example!(spectral_features);
example!(feature_ranking);
example!(snapshot);
example!(corpus_pipeline);
