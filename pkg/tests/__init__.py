"""make test folder a package for coverage."""
