# Tests root package
