"""Tools for integral means, Hadamard convolution and star functions on the disc."""
