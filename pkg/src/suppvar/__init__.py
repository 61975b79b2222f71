"""Support varieties for module categories of finite-dimensional Hopf algebras over finite fields."""
