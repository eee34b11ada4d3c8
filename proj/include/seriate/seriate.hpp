#pragma once

// Matrix seriation toolkit: permutes the rows and columns of a relational data
// matrix so latent structure (blocks, stripes, gradients, bands) becomes
// visible. Ships a trainable encoder-decoder reordering method plus spectral
// and distance-based baselines, synthetic instance generators and a
// flip-aware reordering error metric.

#include "seriate/baselines.hpp"
#include "seriate/checkpoint.hpp"
#include "seriate/deeptmr.hpp"
#include "seriate/errors.hpp"
#include "seriate/eval.hpp"
#include "seriate/io.hpp"
#include "seriate/linalg.hpp"
#include "seriate/matrix.hpp"
#include "seriate/nn.hpp"
#include "seriate/permutation.hpp"
#include "seriate/report.hpp"
#include "seriate/rng.hpp"
#include "seriate/synthetic.hpp"
