#pragma once

#include "relhom/ab_group.hpp"
#include "relhom/cohomology.hpp"
#include "relhom/complex.hpp"
#include "relhom/errors.hpp"
#include "relhom/hom.hpp"
#include "relhom/int_matrix.hpp"
#include "relhom/io.hpp"
#include "relhom/module.hpp"
#include "relhom/module_ops.hpp"
#include "relhom/prop_suite.hpp"
#include "relhom/random.hpp"
#include "relhom/relative.hpp"
#include "relhom/smith.hpp"
