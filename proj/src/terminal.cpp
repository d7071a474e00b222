namespace dlmpc {}
