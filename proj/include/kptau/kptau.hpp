#pragma once

#include "kptau/curve.hpp"
#include "kptau/errors.hpp"
#include "kptau/identities.hpp"
#include "kptau/io.hpp"
#include "kptau/parallel.hpp"
#include "kptau/partitions.hpp"
#include "kptau/periods.hpp"
#include "kptau/poly.hpp"
#include "kptau/schur.hpp"
#include "kptau/series.hpp"
#include "kptau/tau.hpp"
#include "kptau/theta.hpp"
