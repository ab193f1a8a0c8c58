#ifndef EDBN_EDBN_HPP
#define EDBN_EDBN_HPP

#include "edbn/bn_learn.hpp"
#include "edbn/detect.hpp"
#include "edbn/error.hpp"
#include "edbn/eval.hpp"
#include "edbn/event_log.hpp"
#include "edbn/fd.hpp"
#include "edbn/model.hpp"
#include "edbn/random.hpp"
#include "edbn/rational.hpp"
#include "edbn/shipping_model.hpp"
#include "edbn/stats.hpp"
#include "edbn/synth.hpp"

#endif
