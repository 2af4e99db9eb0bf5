#pragma once

#include "hgembed/analysis.hpp"
#include "hgembed/embedding.hpp"
#include "hgembed/error.hpp"
#include "hgembed/gde.hpp"
#include "hgembed/gdse.hpp"
#include "hgembed/hypergraph.hpp"
#include "hgembed/io.hpp"
#include "hgembed/log.hpp"
#include "hgembed/loss.hpp"
#include "hgembed/rgh.hpp"
#include "hgembed/rng.hpp"
#include "hgembed/spectral.hpp"
#include "hgembed/trace.hpp"
