import jax

# Every tolerance in the package assumes complex128 arithmetic.
jax.config.update("jax_enable_x64", True)
