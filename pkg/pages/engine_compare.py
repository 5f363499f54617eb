import streamlit as st
import plotly.graph_objects as go

from config.settings import DISPLAY_SETTINGS
from config.constants import ENGINE_DEFAULT, ENGINE_DISPLAY_NAMES, UNIFIED_COLOR_PALETTE
from config.help_texts import CHART_TEXTS, COMMON_MESSAGES, PAGE_DESCRIPTIONS
from config.ui_styles import PAGE_CSS, SECTION_HEADER_TEMPLATE
from utils.report import relative_gain, summarize_engines

GAIN_METRICS = {
    'スループット': 'median_throughput_ops_s',
    '平均displacement': 'median_avg_displacement'
}


def show():
    """エンジン比較ページを表示"""
    st.markdown(PAGE_CSS, unsafe_allow_html=True)
    st.markdown(SECTION_HEADER_TEMPLATE.format(**PAGE_DESCRIPTIONS['engine_compare']), unsafe_allow_html=True)

    df = st.session_state.report
    if df is None:
        st.warning(COMMON_MESSAGES['data_not_found'])
        return

    summary = summarize_engines(df)

    metric_label = st.radio("比較指標", list(GAIN_METRICS.keys()), horizontal=True)
    metric = GAIN_METRICS[metric_label]

    if (summary['engine'] == ENGINE_DEFAULT).any():
        summary = relative_gain(summary, metric=metric)
        gain_column = f'{metric}_gain'

        st.markdown('<div class="step-title">defaultに対する相対差</div>', unsafe_allow_html=True)
        st.markdown(CHART_TEXTS['gain_note'])
        compared = summary[summary['engine'] != ENGINE_DEFAULT]

        fig = go.Figure()
        for engine, rows in compared.groupby('engine', sort=True):
            fig.add_trace(go.Bar(
                x=rows['experiment'],
                y=rows[gain_column] * 100,
                name=ENGINE_DISPLAY_NAMES.get(engine, engine),
                marker_color=UNIFIED_COLOR_PALETTE.get(engine, '#333333'),
                text=[f"{value:+.1f}%" for value in rows[gain_column] * 100],
                textposition='outside'
            ))
        fig.update_layout(
            barmode='group',
            yaxis_title=f"{metric_label}の相対差（%）",
            height=DISPLAY_SETTINGS['default_chart_height'],
            legend=dict(orientation="h", yanchor="bottom", y=1.02, xanchor="right", x=1),
            margin=dict(l=10, r=10, t=30, b=10),
            plot_bgcolor='rgba(0,0,0,0)',
            paper_bgcolor='rgba(0,0,0,0)'
        )
        st.plotly_chart(fig, use_container_width=True)
    else:
        st.info(COMMON_MESSAGES['no_baseline'])

    st.markdown('<div class="step-title">モード滞在比率</div>', unsafe_allow_html=True)
    fig = go.Figure()
    labels = summary['experiment'] + ' / ' + summary['engine'].map(lambda engine: ENGINE_DISPLAY_NAMES.get(engine, engine))
    for column, mode_label, color_key in (
        ('learn_share', 'learn+adapt', 'learn'),
        ('sense_share', 'sense', 'sense'),
        ('default_share', 'default', 'default_mode'),
    ):
        fig.add_trace(go.Bar(
            x=labels,
            y=summary[column] * 100,
            name=mode_label,
            marker_color=UNIFIED_COLOR_PALETTE[color_key]
        ))
    fig.update_layout(
        barmode='stack',
        yaxis_title="操作数に占める比率（%）",
        height=DISPLAY_SETTINGS['default_chart_height'],
        margin=dict(l=10, r=10, t=30, b=10),
        plot_bgcolor='rgba(0,0,0,0)',
        paper_bgcolor='rgba(0,0,0,0)'
    )
    st.plotly_chart(fig, use_container_width=True)

    st.markdown('<div class="step-title">集計表（シード間の中央値）</div>', unsafe_allow_html=True)
    st.dataframe(summary, use_container_width=True, hide_index=True)
