#pragma once

#include "qcorr/bounds.hpp"
#include "qcorr/correlations.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/qlinalg.hpp"
#include "qcorr/random.hpp"
#include "qcorr/tolerances.hpp"
#include "qcorr/tomography.hpp"
#include "qcorr/werner.hpp"
#include "qcorr/witnesses.hpp"
