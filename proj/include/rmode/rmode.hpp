#pragma once

#include "rmode/bitvec.hpp"
#include "rmode/boundary.hpp"
#include "rmode/enumerate.hpp"
#include "rmode/errors.hpp"
#include "rmode/ims2_view.hpp"
#include "rmode/index_file.hpp"
#include "rmode/mode_index.hpp"
#include "rmode/monotone.hpp"
#include "rmode/oracle.hpp"
#include "rmode/probe.hpp"
#include "rmode/rmq.hpp"
#include "rmode/sk_index.hpp"
#include "rmode/text.hpp"
